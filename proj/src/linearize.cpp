#include "ahpd/linearize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace ahpd {

namespace {

Vec u_scale() {
  Vec s(7);
  s << 1.0, 1e-3, 1.0, 1e-3, 1.0, 1e-3, 1e-6;
  return s;
}

// Central differences of a vector function over the entries of v.
template <class Fn>
Mat central(const Fn& fn, const Vec& v, const Vec& scale, Eigen::Index rows) {
  Mat J(rows, v.size());
  Vec vp = v, vm = v;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double h = std::max(1e-6 * std::abs(v[j]), 1e-8 * scale[j]);
    vp[j] = v[j] + h;
    vm[j] = v[j] - h;
    J.col(j) = (fn(vp) - fn(vm)) / (vp[j] - vm[j]);
    vp[j] = vm[j] = v[j];
  }
  return J;
}

void write_vector(std::ostream& os, const char* name, const Vec& v) {
  os << name << "," << v.size() << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    os << (i ? "," : "") << buf;
  }
  os << "\n";
}

void write_matrix(std::ostream& os, const char* name, const Mat& m) {
  os << name << "," << m.rows() << "," << m.cols() << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> next_fields(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    return split(line);
  }
  throw std::runtime_error("state-space file ended early");
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number in state-space file: " + s);
  return v;
}

Mat read_matrix(std::istream& is, const std::string& name) {
  const auto head = next_fields(is);
  if (head.size() != 3 || head[0] != name) {
    throw std::runtime_error("expected matrix " + name + " in state-space file");
  }
  const long r = std::stol(head[1]), c = std::stol(head[2]);
  Mat m(r, c);
  for (long i = 0; i < r; ++i) {
    const auto row = next_fields(is);
    if (static_cast<long>(row.size()) != c) throw std::runtime_error("short row in " + name);
    for (long j = 0; j < c; ++j) m(i, j) = to_double(row[j]);
  }
  return m;
}

Vec read_vector(std::istream& is, const std::string& name) {
  const auto head = next_fields(is);
  if (head.size() != 2 || head[0] != name) {
    throw std::runtime_error("expected vector " + name + " in state-space file");
  }
  const long n = std::stol(head[1]);
  Vec v(n);
  const auto row = next_fields(is);
  if (static_cast<long>(row.size()) != n) throw std::runtime_error("short vector " + name);
  for (long i = 0; i < n; ++i) v[i] = to_double(row[i]);
  return v;
}

}  // namespace

Jacobians jacobians(const Model& model, const Vec& x0, const Vec& z0, const Vec& u0) {
  const int nx = model.nx(), nz = model.nz();
  Jacobians j;
  auto fg_x = [&](const Vec& x) {
    const Residuals r = model.residuals(x, z0, u0);
    Vec out(nx + nz);
    out << r.f, r.g;
    return out;
  };
  auto fg_z = [&](const Vec& z) {
    const Residuals r = model.residuals(x0, z, u0);
    Vec out(nx + nz);
    out << r.f, r.g;
    return out;
  };
  auto fg_u = [&](const Vec& u) {
    const Residuals r = model.residuals(x0, z0, u);
    Vec out(nx + nz);
    out << r.f, r.g;
    return out;
  };
  const Mat Jx = central(fg_x, x0, model.x_scale(), nx + nz);
  const Mat Jz = central(fg_z, z0, model.z_scale(), nx + nz);
  const Mat Ju = central(fg_u, u0, u_scale(), nx + nz);
  j.f_x = Jx.topRows(nx);
  j.g_x = Jx.bottomRows(nz);
  j.f_z = Jz.topRows(nx);
  j.g_z = Jz.bottomRows(nz);
  j.f_u = Ju.topRows(nx);
  j.g_u = Ju.bottomRows(nz);
  j.y_x = Mat::Zero(model.ny(), nx);
  j.y_z = model.output_selection();
  j.y_u = Mat::Zero(model.ny(), model.nu());

  // condition estimate in scaled units, where it is meaningful
  const Mat gz_scaled =
      model.g_scale().cwiseInverse().asDiagonal() * j.g_z * model.z_scale().asDiagonal();
  j.g_z_rcond = Eigen::PartialPivLU<Mat>(gz_scaled).rcond();
  if (!(j.g_z_rcond > 1e-300)) {
    throw ConditioningError("algebraic Jacobian is singular: model not index 1 here",
                            j.g_z_rcond);
  }
  return j;
}

StateSpace reduce(const Jacobians& j, double rcond_warn) {
  const Eigen::PartialPivLU<Mat> lu(j.g_z);
  const Mat Gx = lu.solve(j.g_x);
  const Mat Gu = lu.solve(j.g_u);
  StateSpace ss;
  ss.A = j.f_x - j.f_z * Gx;
  ss.B = j.f_u - j.f_z * Gu;
  ss.C = j.y_x - j.y_z * Gx;
  ss.D = j.y_u - j.y_z * Gu;
  ss.g_z_rcond = j.g_z_rcond;
  ss.ill_conditioned = j.g_z_rcond < rcond_warn;
  return ss;
}

StateSpace linearize(const Model& model, const SteadyState& s) {
  StateSpace ss = reduce(jacobians(model, s.x, s.z, s.u));
  ss.x0 = s.x;
  ss.z0 = s.z;
  ss.u0 = s.u;
  ss.y0 = model.output_map(s.z);
  ss.variant = to_string(model.variant());
  return ss;
}

Vec StateSpace::steady_gain_column(int input) const {
  return steady_gain().col(input);
}

std::vector<int> StateSpace::active_states() const {
  std::vector<int> idx;
  for (int i = 0; i < A.rows(); ++i) {
    const bool inert = A.row(i).isZero(0.0) && A.col(i).isZero(0.0) && B.row(i).isZero(0.0) &&
                       C.col(i).isZero(0.0);
    if (!inert) idx.push_back(i);
  }
  return idx;
}

Mat StateSpace::steady_gain() const {
  const std::vector<int> k = active_states();
  const Mat Ar = A(k, k);
  return -C(Eigen::all, k) * Ar.partialPivLu().solve(B(k, Eigen::all)) + D;
}

Trajectory simulate_linear(const StateSpace& ss, const InputSchedule& schedule, double t_end,
                           double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Eigen::Index n = ss.A.rows(), m = ss.B.cols();
  if (ss.A.cols() != n || ss.B.rows() != n || ss.C.cols() != n || ss.D.cols() != m ||
      ss.C.rows() != ss.D.rows() || ss.u0.size() != m || ss.x0.size() != n) {
    throw std::invalid_argument("inconsistent state-space dimensions");
  }

  const Vec s = ss.x0.cwiseAbs().cwiseMax(1.0);
  const Vec s_inv = s.cwiseInverse();

  // discretizations are cached per distinct step length
  std::map<double, std::pair<Mat, Mat>> cache;
  auto discrete = [&](double h) -> const std::pair<Mat, Mat>& {
    auto it = cache.find(h);
    if (it != cache.end()) return it->second;
    // states in kg and J differ by six orders of magnitude; balance before exp
    Mat M = Mat::Zero(n + m, n + m);
    M.topLeftCorner(n, n) = s_inv.asDiagonal() * ss.A * s.asDiagonal() * h;
    M.topRightCorner(n, m) = s_inv.asDiagonal() * ss.B * h;
    const Mat E = M.exp();
    Mat Ad = s.asDiagonal() * E.topLeftCorner(n, n) * s_inv.asDiagonal();
    Mat Bd = s.asDiagonal() * E.topRightCorner(n, m);
    return cache.emplace(h, std::make_pair(std::move(Ad), std::move(Bd))).first->second;
  };

  const double tiny = 1e-9 * dt;
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor(t_end / dt + 1e-9));
  for (long k = 1; k <= steps; ++k) grid.push_back(static_cast<double>(k) * dt);
  if (grid.empty() || grid.back() < t_end - tiny) grid.push_back(t_end);
  for (const auto& bp : schedule.breakpoints()) {
    if (bp.first > tiny && bp.first < t_end - tiny) grid.push_back(bp.first);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) { return std::abs(a - b) <= tiny; }),
             grid.end());

  Trajectory tr;
  Vec dx = Vec::Zero(n);
  auto record = [&](double t, const Vec& u) {
    const Vec du = u - ss.u0;
    tr.t.push_back(t);
    tr.x.push_back(ss.x0 + dx);
    tr.u.push_back(u);
    tr.y.push_back(ss.y0 + ss.C * dx + ss.D * du);
  };
  record(0.0, schedule.after(0.0));
  double t = 0.0;
  for (double t_next : grid) {
    const Vec& u = schedule.after(t);
    const auto& [Ad, Bd] = discrete(t_next - t);
    dx = Ad * dx + Bd * (u - ss.u0);
    t = t_next;
    record(t, u);
    tr.diagnostics.push_back({0, 0.0, true});
  }
  return tr;
}

void write_state_space(std::ostream& os, const StateSpace& ss) {
  auto join = [](const auto& names) {
    std::string s;
    for (const auto& n : names) s += "," + std::string(n);
    return s;
  };
  os << "# linear state-space model, deviations from the anchor\n";
  os << "variant," << ss.variant << "\n";
  os << "states" << join(StateVector::names()) << "\n";
  os << "inputs" << join(InputVector::names()) << "\n";
  os << "outputs" << join(OutputVector::names()) << "\n";
  write_matrix(os, "A", ss.A);
  write_matrix(os, "B", ss.B);
  write_matrix(os, "C", ss.C);
  write_matrix(os, "D", ss.D);
  write_vector(os, "x0", ss.x0);
  write_vector(os, "z0", ss.z0);
  write_vector(os, "u0", ss.u0);
  write_vector(os, "y0", ss.y0);
}

StateSpace read_state_space(std::istream& is) {
  StateSpace ss;
  auto v = next_fields(is);
  if (v.size() != 2 || v[0] != "variant") throw std::runtime_error("missing variant line");
  ss.variant = v[1];
  for (const char* key : {"states", "inputs", "outputs"}) {
    if (next_fields(is).at(0) != key) {
      throw std::runtime_error(std::string("missing ") + key + " header");
    }
  }
  ss.A = read_matrix(is, "A");
  ss.B = read_matrix(is, "B");
  ss.C = read_matrix(is, "C");
  ss.D = read_matrix(is, "D");
  ss.x0 = read_vector(is, "x0");
  ss.z0 = read_vector(is, "z0");
  ss.u0 = read_vector(is, "u0");
  ss.y0 = read_vector(is, "y0");
  return ss;
}

}  // namespace ahpd

#include "ahpd/params_io.h"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace ahpd {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Window window_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw std::runtime_error(where + ": window must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <std::size_t N>
void read_array(const json& j, const std::string& key, std::array<double, N>& out) {
  if (!j.is_array() || j.size() != N) {
    throw std::runtime_error(key + " must be an array of " + std::to_string(N) + " numbers");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
}

}  // namespace

PropertyParams load_property_params(const std::string& path, const PropertyParams& base) {
  const json j = read_json(path);
  PropertyParams p = base;
  for (const auto& [name, body] : j.items()) {
    CorrelationParams* c = nullptr;
    try {
      c = &p.by_name(name);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path + ": unknown correlation '" + name + "'");
    }
    for (const auto& [key, value] : body.items()) {
      if (key == "T") {
        c->T = window_from(value, name + ".T");
      } else if (key == "xi") {
        c->xi = window_from(value, name + ".xi");
      } else if (key == "p") {
        c->p = window_from(value, name + ".p");
      } else if (key == "coefficients") {
        for (const auto& [cname, cvalue] : value.items()) {
          bool found = false;
          for (std::size_t i = 0; i < c->coef.size(); ++i) {
            if (c->coefficient_name(i) == cname) {
              c->coef[i] = cvalue.get<double>();
              found = true;
            }
          }
          if (!found) {
            throw std::runtime_error(path + ": " + name + " has no coefficient " + cname);
          }
        }
      } else {
        throw std::runtime_error(path + ": unknown key " + name + "." + key);
      }
    }
  }
  return p;
}

std::string dump_property_params(const PropertyParams& p) {
  json j = json::object();
  for (const auto* c : p.correlations()) {
    json body;
    body["T"] = {c->T.lo, c->T.hi};
    if (c->has_xi()) body["xi"] = {c->xi.lo, c->xi.hi};
    if (c->has_p()) body["p"] = {c->p.lo, c->p.hi};
    json coef = json::object();
    for (std::size_t i = 0; i < c->coef.size(); ++i) coef[c->coefficient_name(i)] = c->coef[i];
    body["coefficients"] = coef;
    j[c->name] = body;
  }
  return j.dump(2) + "\n";
}

ModelParams load_model_params(const std::string& path, const ModelParams& base) {
  const json j = read_json(path);
  ModelParams p = base;
  std::map<std::string, double*> scalars = {
      {"K_SEV", &p.K_SEV},
      {"UA_G_const", &p.UA_G_const},
      {"UA_C_const", &p.UA_C_const},
      {"UA_E_const", &p.UA_E_const},
      {"UA_A_const", &p.UA_A_const},
      {"UA_SHX_const", &p.UA_SHX_const},
      {"m_LiBr_sumps", &p.m_LiBr_sumps},
      {"m_total_sumps", &p.m_total_sumps},
      {"m_Ref_C", &p.m_Ref_C},
      {"m_RSo_SHX", &p.m_RSo_SHX},
      {"m_PSo_SHX", &p.m_PSo_SHX},
      {"phi_sub", &p.phi_sub},
      {"mdot_Ref_rec", &p.mdot_Ref_rec},
  };
  for (const auto& [key, value] : j.items()) {
    if (auto it = scalars.find(key); it != scalars.end()) {
      *it->second = value.get<double>();
    } else if (key == "K_G") {
      read_array(value, key, p.K_G);
    } else if (key == "K_C") {
      read_array(value, key, p.K_C);
    } else if (key == "K_E") {
      read_array(value, key, p.K_E);
    } else if (key == "K_A") {
      read_array(value, key, p.K_A);
    } else if (key == "K_h") {
      read_array(value, key, p.K_h);
    } else if (key == "K_c") {
      read_array(value, key, p.K_c);
    } else if (key == "variant") {
      p.variant = parse_variant(value.get<std::string>());
    } else {
      throw std::runtime_error(path + ": unknown model parameter '" + key + "'");
    }
  }
  p.validate();
  return p;
}

std::string dump_model_params(const ModelParams& p) {
  json j;
  j["K_G"] = p.K_G;
  j["K_C"] = p.K_C;
  j["K_E"] = p.K_E;
  j["K_A"] = p.K_A;
  j["K_h"] = p.K_h;
  j["K_c"] = p.K_c;
  j["K_SEV"] = p.K_SEV;
  j["UA_G_const"] = p.UA_G_const;
  j["UA_C_const"] = p.UA_C_const;
  j["UA_E_const"] = p.UA_E_const;
  j["UA_A_const"] = p.UA_A_const;
  j["UA_SHX_const"] = p.UA_SHX_const;
  j["m_LiBr_sumps"] = p.m_LiBr_sumps;
  j["m_total_sumps"] = p.m_total_sumps;
  j["m_Ref_C"] = p.m_Ref_C;
  j["m_RSo_SHX"] = p.m_RSo_SHX;
  j["m_PSo_SHX"] = p.m_PSo_SHX;
  j["phi_sub"] = p.phi_sub;
  j["mdot_Ref_rec"] = p.mdot_Ref_rec;
  j["variant"] = to_string(p.variant);
  return j.dump(2) + "\n";
}

SolverOptions load_solver_options(const std::string& path, const SolverOptions& base) {
  const json j = read_json(path);
  SolverOptions o = base;
  std::map<std::string, double*> fields = {
      {"residual_tol", &o.residual_tol}, {"step_tol", &o.step_tol},
      {"backtrack", &o.backtrack},       {"min_step", &o.min_step},
      {"fd_rel", &o.fd_rel},             {"fd_abs", &o.fd_abs},
      {"rcond_warn", &o.rcond_warn},     {"scale_factor", &o.scale_factor},
  };
  for (const auto& [key, value] : j.items()) {
    if (auto it = fields.find(key); it != fields.end()) {
      *it->second = value.get<double>();
    } else if (key == "max_iterations") {
      o.max_iterations = value.get<int>();
    } else {
      throw std::runtime_error(path + ": unknown solver option '" + key + "'");
    }
  }
  o.validate();
  return o;
}

}  // namespace ahpd

#include "vatlas/config.hpp"

#include "vatlas/error.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

namespace vatlas {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw input_error("unknown field '" + it.key() + "' in " + where);
}

double positive(const json& obj, const char* key, const std::string& where) {
  if (!obj[key].is_number()) throw input_error(where + "." + key + " must be a number");
  const double v = obj[key].get<double>();
  if (!(v > 0) || !std::isfinite(v)) throw input_error(where + "." + key + " must be positive");
  return v;
}

template <class T>
void maybe(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  if constexpr (std::is_integral_v<T>) {
    if (!obj[key].is_number_integer() || obj[key].get<long long>() <= 0)
      throw input_error(where + "." + key + " must be a positive integer");
    out = obj[key].get<T>();
  } else {
    out = positive(obj, key, where);
  }
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw numerical_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

RunConfig load_config(const json& doc, const std::string& fallback_name) {
  if (!doc.is_object()) throw input_error("config must be a JSON object");
  reject_unknown(doc, {"name", "curves_a", "curves_b", "t", "t_relative", "mesh", "tolerances"}, "config");
  RunConfig c;
  c.hash = sha256_hex(doc.dump());
  c.name = fallback_name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty())
      throw input_error("config.name must be a non-empty string");
    c.name = doc["name"].get<std::string>();
  }
  for (char ch : c.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
      throw input_error("config.name may only use letters, digits, '_', '-' and '.'");

  if (doc.contains("tolerances")) {
    const auto& tol = doc["tolerances"];
    if (!tol.is_object()) throw input_error("config.tolerances must be an object");
    reject_unknown(tol, {"theta_min", "eps_geo_rel", "max_crossings", "oracle_face_limit", "eigen_tol", "graph_x",
                         "helicoid_fit_max"},
                   "tolerances");
    maybe(tol, "theta_min", "tolerances", c.arrangement.theta_min);
    maybe(tol, "eps_geo_rel", "tolerances", c.arrangement.eps_geo_rel);
    maybe(tol, "max_crossings", "tolerances", c.arrangement.max_crossings);
    maybe(tol, "oracle_face_limit", "tolerances", c.oracle_face_limit);
    maybe(tol, "eigen_tol", "tolerances", c.eigen_tol);
    maybe(tol, "graph_x", "tolerances", c.graph_x);
    maybe(tol, "helicoid_fit_max", "tolerances", c.helicoid_fit_max);
    if (c.arrangement.theta_min >= kPi / 2) throw input_error("tolerances.theta_min must be below pi/2");
    if (c.graph_x >= 1) throw input_error("tolerances.graph_x must be below 1");
  }

  c.curves = load_curve_set(doc);
  c.diameter = c.curves.diameter();
  if (!(c.diameter > 0)) throw input_error("curves have zero extent");

  if (doc.contains("t") && doc.contains("t_relative")) throw input_error("give either t or t_relative, not both");
  if (doc.contains("t")) c.t = positive(doc, "t", "config");
  else if (doc.contains("t_relative")) c.t = positive(doc, "t_relative", "config") * c.diameter;
  else c.t = 0.02 * c.diameter;
  if (c.t > 0.5 * c.diameter) c.warnings.push_back("asymptotic regime not guaranteed: t exceeds half the diameter");

  c.relax.tol_H = 1e-3 / c.diameter;
  if (doc.contains("mesh")) {
    const auto& m = doc["mesh"];
    if (!m.is_object()) throw input_error("config.mesh must be an object");
    reject_unknown(m, {"h", "h_relative", "rho", "corner_deg", "tol_H", "max_iters"}, "mesh");
    if (m.contains("h") && m.contains("h_relative")) throw input_error("give either mesh.h or mesh.h_relative");
    if (m.contains("h")) c.mesh.h = positive(m, "h", "mesh");
    if (m.contains("h_relative")) c.mesh.h = positive(m, "h_relative", "mesh") * c.diameter;
    c.h_explicit = c.mesh.h > 0;
    maybe(m, "rho", "mesh", c.mesh.rho);
    maybe(m, "corner_deg", "mesh", c.mesh.corner_deg);
    maybe(m, "tol_H", "mesh", c.relax.tol_H);
    maybe(m, "max_iters", "mesh", c.relax.max_iters);
  }
  c.mesh.t = c.t;
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw input_error("malformed config " + path.string() + ": " + e.what());
  }
  return load_config(doc, path.stem().string());
}

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json e;
  e["name"] = name;
  e["hash"] = hash;
  e["diameter"] = diameter;
  e["t"] = t;
  e["mesh"] = {{"h", mesh.h}, {"rho", mesh.rho}, {"corner_deg", mesh.corner_deg}, {"tol_H", relax.tol_H},
               {"max_iters", relax.max_iters}};
  e["tolerances"] = {{"theta_min", arrangement.theta_min},
                     {"eps_geo_rel", arrangement.eps_geo_rel},
                     {"max_crossings", arrangement.max_crossings},
                     {"oracle_face_limit", oracle_face_limit},
                     {"eigen_tol", eigen_tol},
                     {"graph_x", graph_x},
                     {"helicoid_fit_max", helicoid_fit_max}};
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const auto& cv : this->curves.curves) curves.push_back({{"name", cv.name()}, {"points", cv.size()}});
  e["curves"] = curves;
  return e;
}

}  // namespace vatlas

#include "dnhb/serialize.hpp"

#include <fstream>
#include <sstream>

#include "dnhb/errors.hpp"

namespace dnhb {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row_re = json::array();
    json row_im = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row_re.push_back(m.re(i, j));
      row_im.push_back(m.im(i, j));
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw ParseError(context + ": expected object with re/im arrays");
  const json& re = j["re"];
  const json& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw ParseError(context + ": re/im must be arrays of equal row count");
  const std::size_t rows = re.size();
  const std::size_t cols = rows == 0 ? 0 : re[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!re[i].is_array() || re[i].size() != cols || !im[i].is_array() ||
        im[i].size() != cols)
      throw ParseError(context + ": ragged matrix rows at row " +
                       std::to_string(i));
    for (std::size_t c = 0; c < cols; ++c) {
      if (!re[i][c].is_number() || !im[i][c].is_number())
        throw ParseError(context + ": non-numeric entry at (" +
                         std::to_string(i) + "," + std::to_string(c) + ")");
      m.re(i, c) = re[i][c].get<double>();
      m.im(i, c) = im[i][c].get<double>();
    }
  }
  return m;
}

json system_config_to_json(const SystemConfig& cfg) {
  return json{{"n_t", cfg.n_t},
              {"n_r", cfg.n_r},
              {"n_rf_t", cfg.n_rf_t},
              {"n_rf_r", cfg.n_rf_r},
              {"n_s", cfg.n_s},
              {"k_users", cfg.k_users},
              {"power_budget", cfg.power_budget},
              {"noise_variance", cfg.noise_variance}};
}

SystemConfig system_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"n_t", "n_r", "n_rf_t", "n_rf_r", "n_s", "k_users",
                       "power_budget", "noise_variance"},
                      "system");
  SystemConfig cfg;
  if (j.contains("n_t")) cfg.n_t = j["n_t"].get<std::size_t>();
  if (j.contains("n_r")) cfg.n_r = j["n_r"].get<std::size_t>();
  if (j.contains("n_rf_t")) cfg.n_rf_t = j["n_rf_t"].get<std::size_t>();
  if (j.contains("n_rf_r")) cfg.n_rf_r = j["n_rf_r"].get<std::size_t>();
  if (j.contains("n_s")) cfg.n_s = j["n_s"].get<std::size_t>();
  if (j.contains("k_users")) cfg.k_users = j["k_users"].get<std::size_t>();
  if (j.contains("power_budget"))
    cfg.power_budget = j["power_budget"].get<double>();
  if (j.contains("noise_variance"))
    cfg.noise_variance = j["noise_variance"].get<double>();
  return cfg;
}

const json& require_key(const json& j, const std::string& key,
                        const std::string& context) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(context + ": missing required key '" + key + "'");
  return j.at(key);
}

void reject_unknown_keys(const json& j,
                         const std::vector<std::string>& allowed,
                         const std::string& context) {
  if (!j.is_object())
    throw ParseError(context + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ParseError(context + ": unknown key '" + it.key() + "'");
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace dnhb

#ifndef DNHB_SERIALIZE_HPP
#define DNHB_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "dnhb/complex_matrix.hpp"
#include "dnhb/system_config.hpp"

namespace dnhb {

// JSON helpers shared by the channel-set, checkpoint and config files.
// Matrices are stored as {"re": [[...]], "im": [[...]]} nested row arrays;
// doubles survive the round trip bit-exactly (shortest round-trip printing).

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j,
                               const std::string& context);

nlohmann::json system_config_to_json(const SystemConfig& cfg);
SystemConfig system_config_from_json(const nlohmann::json& j);

// Fetch j[key], throwing ParseError naming the key when absent.
const nlohmann::json& require_key(const nlohmann::json& j,
                                  const std::string& key,
                                  const std::string& context);

// Throws ParseError if j holds keys outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j,
                         const std::vector<std::string>& allowed,
                         const std::string& context);

// Reads a whole file, throwing IoError on failure, then parses it as JSON,
// throwing ParseError with the parser's position info on failure.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace dnhb

#endif  // DNHB_SERIALIZE_HPP

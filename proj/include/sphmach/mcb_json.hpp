// JSON form of a mapping class biset ("sphmach-mcb/1"): machines in the
// text format, words as strings, one record per table edge.
#pragma once

#include <json.hpp>

#include "sphmach/mcbiset.hpp"

namespace sphmach {

nlohmann::json mcb_to_json(MappingClassBiset const& mcb);
// Throws std::invalid_argument on malformed documents.
MappingClassBiset mcb_from_json(nlohmann::json const& doc);

MappingClassBiset read_mcb_file(std::string const& path);

}  // namespace sphmach

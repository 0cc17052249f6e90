#pragma once

#include <string>

#include <json.hpp>

namespace bandlab {

// Serializes JSON deterministically: object keys sorted, floating-point values
// printed with %.17g (round-trip exact), integers kept as integers.  Two
// semantically equal documents produce byte-identical text, which makes report
// files directly comparable with memcmp/diff.  indent <= 0 yields a compact
// single-line form (used for config-echo header lines in CSV output).
std::string canonical_dump(const nlohmann::json& value, int indent = 2);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace bandlab

#include "bandlab/canonical_json.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bandlab/errors.hpp"

namespace bandlab {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump_rec(const nlohmann::json& v, std::string& out, int indent, int depth) {
    const bool compact = indent <= 0;
    const std::string pad(compact ? 0 : static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(compact ? 0 : static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const char* open_sep = compact ? "" : "\n";
    const std::string item_sep = compact ? "," : ",\n";
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            // std::map iteration gives the sorted key order.
            std::map<std::string, const nlohmann::json*> items;
            for (auto it = v.begin(); it != v.end(); ++it) items[it.key()] = &it.value();
            out += "{";
            out += open_sep;
            bool first = true;
            for (const auto& [key, val] : items) {
                if (!first) out += item_sep;
                first = false;
                out += pad_in;
                out += nlohmann::json(key).dump();
                out += compact ? ":" : ": ";
                dump_rec(*val, out, indent, depth + 1);
            }
            out += open_sep + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += open_sep;
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += item_sep;
                first = false;
                out += pad_in;
                dump_rec(item, out, indent, depth + 1);
            }
            out += open_sep + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value, int indent) {
    std::string out;
    dump_rec(value, out, indent, 0);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open for writing: " + path);
    out << text;
    if (!out) throw SchemaError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bandlab

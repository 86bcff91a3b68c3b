#pragma once

// JSON text emission with every floating-point number written as "%.17g".
// nlohmann::json is used for building and parsing documents; its own dump()
// prints the shortest round-trip form, which is not what the file formats
// promise.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace mdep::detail {

inline std::string format_real(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

inline void emit_json(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += nlohmann::json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                emit_json(it.value(), out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Short numeric rows stay on one line.
            bool flat = j.size() <= 4;
            for (const auto& v : j) flat = flat && v.is_number();
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                emit_json(v, out, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_real(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

/// Pretty-printed (indent >= 0) or compact (indent < 0) text, newline-terminated when pretty.
inline std::string dump_json(const nlohmann::json& j, int indent = 2) {
    std::string out;
    emit_json(j, out, indent, 0);
    if (indent >= 0) out += '\n';
    return out;
}

}  // namespace mdep::detail

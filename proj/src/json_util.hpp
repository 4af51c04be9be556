#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "dynamap/errors.hpp"

namespace dynamap::detail {

using nlohmann::json;

inline void require_object(const json &node, const std::string &path) {
    if (!node.is_object()) throw ConfigError(path + " must be an object");
}

// Rejects any key of `node` that is not in `allowed`, naming the offender.
inline void require_keys(const json &node, const std::string &path,
                         const std::vector<std::string> &allowed) {
    require_object(node, path);
    for (const auto &item : node.items()) {
        bool known = false;
        for (const auto &key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown key '" + path + "." + item.key() + "'");
    }
}

template <typename T>
T get_or(const json &node, const std::string &key, const std::string &path, T fallback) {
    if (!node.contains(key)) return fallback;
    try {
        return node.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError("bad value for '" + path + "." + key + "'");
    }
}

inline json parse_text(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace dynamap::detail

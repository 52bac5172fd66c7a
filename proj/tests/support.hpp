#pragma once

#include "hermite/field.hpp"

#include <map>
#include <memory>
#include <string>

namespace hermite::test {

inline std::shared_ptr<const Field> field(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const Field>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    auto f = load_field_file(std::string(HERMITE_FIELD_DIR) + "/" + name + ".field");
    cache.emplace(name, f);
    return f;
}

inline FieldElement el(const Field& f, const std::string& text) { return parse_element(f, text); }

} // namespace hermite::test

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qualtree {

using Id = std::uint32_t;

/// Interned identifiers. The id of a name is its rank in lexicographic order, so
/// iterating ids is the canonical deterministic order.
class NameTable {
public:
    NameTable() = default;

    explicit NameTable(std::vector<std::string> names) : names_(std::move(names))
    {
        std::sort(names_.begin(), names_.end());
        names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    }

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::string& operator[](Id i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<Id> find(std::string_view name) const
    {
        auto it = std::lower_bound(names_.begin(), names_.end(), name);
        if (it == names_.end() || *it != name)
            return std::nullopt;
        return static_cast<Id>(it - names_.begin());
    }

    Id at(std::string_view name) const
    {
        if (auto id = find(name))
            return *id;
        throw std::out_of_range("unknown identifier '" + std::string(name) + "'");
    }

    bool contains(std::string_view name) const { return find(name).has_value(); }

    friend bool operator==(const NameTable&, const NameTable&) = default;

private:
    std::vector<std::string> names_;
};

/// Returns `base` if unused in `taken`, else the first of base', base'', ... that is free.
inline std::string fresh_name(std::string base, const NameTable& taken)
{
    while (taken.contains(base))
        base += '\'';
    return base;
}

} // namespace qualtree

#include "core/hierarchy.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

#include <fstream>
#include <map>
#include <utility>

namespace sdc {

GeneralizationHierarchy::GeneralizationHierarchy(std::string attribute,
                                                 std::vector<std::vector<std::string>> rows)
    : attribute_(std::move(attribute)) {
    if (rows.empty()) {
        throw_usage("hierarchy for '" + attribute_ + "' has no rows");
    }
    depth_ = rows.front().size() - 1;
    for (const auto& row : rows) {
        if (row.empty() || row.size() != depth_ + 1) {
            throw_usage("hierarchy for '" + attribute_ + "' has rows with differing level counts");
        }
        if (!rows_.emplace(row.front(), row).second) {
            throw_usage("hierarchy for '" + attribute_ + "' repeats level-0 value '" + row.front() + "'");
        }
    }
    // Each mapping level i-1 -> i must be a function: equal labels below
    // imply equal labels above.
    for (std::size_t level = 1; level <= depth_; ++level) {
        std::map<std::string, std::string> mapping;
        for (const auto& row : rows) {
            const std::string& from = row[level - 1];
            const std::string& to = row[level];
            auto [it, inserted] = mapping.emplace(from, to);
            if (!inserted && it->second != to) {
                throw_usage("hierarchy for '" + attribute_ + "' maps label '" + from +
                            "' to both '" + it->second + "' and '" + to +
                            "' at level " + std::to_string(level));
            }
        }
    }
}

GeneralizationHierarchy GeneralizationHierarchy::load_file(const std::string& path,
                                                           std::string attribute) {
    std::ifstream in(path);
    if (!in) {
        throw_usage("cannot open hierarchy file '" + path + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(split(line, '\t'));
    }
    return GeneralizationHierarchy(std::move(attribute), std::move(rows));
}

bool GeneralizationHierarchy::contains(const std::string& level0_value) const {
    return rows_.find(level0_value) != rows_.end();
}

const std::string& GeneralizationHierarchy::label(const std::string& level0_value,
                                                  std::size_t level) const {
    if (level > depth_) {
        throw_usage("hierarchy for '" + attribute_ + "' has depth " + std::to_string(depth_) +
                    ", level " + std::to_string(level) + " requested");
    }
    auto it = rows_.find(level0_value);
    if (it == rows_.end()) {
        throw_runtime("value '" + level0_value + "' is not covered by the hierarchy for '" +
                      attribute_ + "'");
    }
    return it->second[level];
}

} // namespace sdc

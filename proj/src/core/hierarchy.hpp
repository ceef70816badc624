#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace sdc {

/// Domain generalization hierarchy for one attribute.
///
/// Level 0 is the identity level (the raw values); each level above it maps
/// the previous level's labels onto coarser labels. Rows that share a label
/// at level i-1 must share a label at level i, so generalizing can only
/// merge groups, never split them.
///
/// File format: one line per level-0 value, tab-separated labels from level 0
/// (leftmost) to level n (rightmost). All lines carry the same label count.
class GeneralizationHierarchy {
public:
    GeneralizationHierarchy(std::string attribute,
                            std::vector<std::vector<std::string>> rows);

    static GeneralizationHierarchy load_file(const std::string& path,
                                             std::string attribute);

    const std::string& attribute() const { return attribute_; }

    /// Number of levels above level 0.
    std::size_t depth() const { return depth_; }

    bool contains(const std::string& level0_value) const;

    /// Label of `level0_value` at `level`; level 0 returns the value itself.
    const std::string& label(const std::string& level0_value, std::size_t level) const;

private:
    std::string attribute_;
    std::size_t depth_ = 0;
    std::unordered_map<std::string, std::vector<std::string>> rows_;
};

} // namespace sdc

#pragma once

// Baseline grouping: agglomerative clustering of elementary components on 1 - |w-correlation|.

#include <optional>
#include <string_view>
#include <vector>

#include "ssa_autogroup/ssa.hpp"

namespace ssa_autogroup {

enum class Linkage { Single, Complete, Average };

[[nodiscard]] std::string_view to_string(Linkage linkage) noexcept;
[[nodiscard]] Linkage parse_linkage(std::string_view name);

struct HcGrouping {
    std::vector<Index> first;   ///< cluster containing component 1 (1-based, ascending)
    std::vector<Index> second;  ///< all other components
    Index g_hc = 1;             ///< largest index in `first`
    Warnings warnings;
};

/// 1 - |w|, with a zero diagonal.
[[nodiscard]] Eigen::MatrixXd dissimilarity(const Eigen::MatrixXd& abs_wcorr);

/// Cluster label (0..clusters-1) per item; label 0 is the cluster of item 0.
/// Ties between equally close pairs merge the lexicographically smallest pair.
[[nodiscard]] std::vector<int> agglomerate(const Eigen::MatrixXd& dissimilarity, Index clusters, Linkage linkage);

/// floor(d / 2), at least 2.
[[nodiscard]] constexpr Index default_cluster_count(Index d) noexcept { return d / 2 < 2 ? 2 : d / 2; }

/// Clusters the d elementary components into `clusters` groups (default floor(d/2)) and
/// splits them into the cluster holding component 1 versus the rest.
[[nodiscard]] HcGrouping hc_grouping(const SsaDecomposition<double>& dec, Linkage linkage = Linkage::Complete,
                                     std::optional<Index> clusters = std::nullopt);

} // namespace ssa_autogroup

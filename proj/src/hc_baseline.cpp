#include "ssa_autogroup/hc_baseline.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ssa_autogroup/separability.hpp"

namespace ssa_autogroup {

std::string_view to_string(Linkage linkage) noexcept {
    switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
    }
    return "unknown";
}

Linkage parse_linkage(std::string_view name) {
    if (name == "single") {
        return Linkage::Single;
    }
    if (name == "complete") {
        return Linkage::Complete;
    }
    if (name == "average") {
        return Linkage::Average;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown linkage '" + std::string(name) + "' (expected single|complete|average)");
}

Eigen::MatrixXd dissimilarity(const Eigen::MatrixXd& abs_wcorr) {
    Eigen::MatrixXd out = (1.0 - abs_wcorr.array().abs()).matrix().cwiseMax(0.0);
    out.diagonal().setZero();
    return out;
}

std::vector<int> agglomerate(const Eigen::MatrixXd& dissimilarity, Index clusters, Linkage linkage) {
    const Index n = dissimilarity.rows();
    if (dissimilarity.cols() != n) {
        throw Error(ErrorKind::LengthMismatch, "dissimilarity matrix must be square");
    }
    if (clusters < 1 || clusters > n) {
        throw Error(ErrorKind::InvalidConfig, "cluster count outside [1, n]");
    }
    Eigen::MatrixXd dist = dissimilarity;
    std::vector<Index> owner(static_cast<std::size_t>(n));  // item -> representative
    std::vector<Index> size(static_cast<std::size_t>(n), 1);
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    for (Index i = 0; i < n; ++i) {
        owner[static_cast<std::size_t>(i)] = i;
    }

    for (Index remaining = n; remaining > clusters; --remaining) {
        Index bi = -1;
        Index bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)]) {
                continue;
            }
            for (Index j = i + 1; j < n; ++j) {
                if (active[static_cast<std::size_t>(j)] && dist(i, j) < best) {
                    best = dist(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        const double si = static_cast<double>(size[static_cast<std::size_t>(bi)]);
        const double sj = static_cast<double>(size[static_cast<std::size_t>(bj)]);
        for (Index k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == bi || k == bj) {
                continue;
            }
            double merged = 0.0;
            switch (linkage) {
            case Linkage::Single: merged = std::min(dist(bi, k), dist(bj, k)); break;
            case Linkage::Complete: merged = std::max(dist(bi, k), dist(bj, k)); break;
            case Linkage::Average: merged = (si * dist(bi, k) + sj * dist(bj, k)) / (si + sj); break;
            }
            dist(bi, k) = dist(k, bi) = merged;
        }
        active[static_cast<std::size_t>(bj)] = false;
        size[static_cast<std::size_t>(bi)] += size[static_cast<std::size_t>(bj)];
        for (auto& o : owner) {
            if (o == bj) {
                o = bi;
            }
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    std::vector<int> label_of(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Index i = 0; i < n; ++i) {
        const auto rep = static_cast<std::size_t>(owner[static_cast<std::size_t>(i)]);
        if (label_of[rep] < 0) {
            label_of[rep] = next++;
        }
        labels[static_cast<std::size_t>(i)] = label_of[rep];
    }
    return labels;
}

HcGrouping hc_grouping(const SsaDecomposition<double>& dec, Linkage linkage, std::optional<Index> clusters) {
    HcGrouping out;
    const Index d = dec.rank();
    if (d < 2) {
        out.warnings.push_back({"hc_grouping", "rank " + std::to_string(d) + " < 2, nothing to cluster; g_hc = 1"});
        if (d == 1) {
            out.first = {1};
        }
        return out;
    }
    auto wc = wcorr_matrix(dec);
    out.warnings = std::move(wc.warnings);
    const Index k = std::clamp<Index>(clusters.value_or(default_cluster_count(d)), 2, d);
    const auto labels = agglomerate(dissimilarity(wc.values), k, linkage);
    for (Index i = 0; i < d; ++i) {
        (labels[static_cast<std::size_t>(i)] == 0 ? out.first : out.second).push_back(i + 1);
    }
    out.g_hc = out.first.back();
    return out;
}

} // namespace ssa_autogroup

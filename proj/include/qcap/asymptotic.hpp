#pragma once

#include <string>
#include <vector>

#include "qcap/bounds.hpp"

namespace qcap {

/// Half-space a . (C,Q,E) <= b.
struct Halfspace {
    Eigen::Vector3d normal;
    double offset = 0.0;
    std::string name;
};

/// Polytope in (C,Q,E) space, as an inequality list plus enumerated vertices.
/// Union regions built from vertex clouds may carry an empty inequality list.
struct RateRegion {
    std::vector<Halfspace> inequalities;
    std::vector<Eigen::Vector3d> vertices;
    std::string label;
};

/// Asymptotic region of a fixed ensemble: three entropic faces plus
/// nonnegativity, vertices enumerated by 3-plane intersections.
RateRegion theta_region(const ChannelRep& channel, const InputEnsemble& ens);

/// Variant with the classical-quantum sum face replaced by the mutual
/// information face C + 2Q <= I(S:B).
RateRegion lambda_region(const ChannelRep& channel, const InputEnsemble& ens);

struct LabeledVertex {
    std::string name;
    Eigen::Vector3d point;
};

struct LambdaVertexSet {
    std::vector<LabeledVertex> vertices;
    double neg_h_sr_bsc = 0.0;  // the sign decides which closed-form subset applies
    bool degenerate = false;    // |value| below tolerance: both subsets returned
};

/// Closed-form vertex coordinates of the mutual-information region, selected
/// by the sign of -H(Sr|B Sc).
LambdaVertexSet lambda_vertices(const ChannelRep& channel, const InputEnsemble& ens);

/// Union of per-ensemble regions at block length 1 (optionally 2 through the
/// tensor power), returned as the vertex cloud of the union; membership in
/// its convex hull is tested with hull_contains. Block lengths above 2 are
/// rejected.
RateRegion region_union(const ChannelRep& channel, const std::vector<InputEnsemble>& family,
                        int n_max = 1);

/// Convex-hull membership via a small feasibility LP.
bool hull_contains(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& p,
                   double tol = 1e-7);

/// All vertices of a halfspace-defined region by exhaustive 3-subset plane
/// intersection with a feasibility filter.
std::vector<Eigen::Vector3d> enumerate_region_vertices(const std::vector<Halfspace>& inequalities,
                                                       double tol = 1e-9);

/// True when the point satisfies every inequality within the tolerance.
bool region_satisfies(const RateRegion& region, const Eigen::Vector3d& p, double tol = 1e-9);

}  // namespace qcap

#pragma once

#include <limits>
#include <tuple>
#include <vector>

#include "treealign/tree.hpp"

namespace treealign::detail {

// Running minimum over root pairs; ties go to the lexicographically smallest
// (root_x, root_z), so the result does not depend on evaluation order.
struct BestPair {
    double value = std::numeric_limits<double>::infinity();
    NodeId rx = kNoParent;
    NodeId rz = kNoParent;

    void offer(double v, NodeId x, NodeId z) {
        if (std::tie(v, x, z) < std::tie(value, rx, rz)) {
            value = v;
            rx = x;
            rz = z;
        }
    }

    static BestPair reduce(const std::vector<BestPair>& partial) {
        BestPair best;
        for (const BestPair& b : partial)
            if (b.rx != kNoParent) best.offer(b.value, b.rx, b.rz);
        return best;
    }
};

}  // namespace treealign::detail

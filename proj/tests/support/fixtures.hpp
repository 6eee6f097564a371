#pragma once

#include <vector>

#include "grank/types.hpp"

namespace grank::testing {

// Items are named A=0, B=1, C=2, D=3 in the comments below.

/// Three users, two items. Users 0 and 1 prefer A over B, user 2 prefers B
/// over A, so the first two share a preference node and the third sits on the
/// opposite one.
inline ObservationSet two_item_fixture() {
    return ObservationSet::from_unsorted({
        {0, 0, 1},
        {1, 0, 1},
        {2, 1, 0},
    });
}

/// Five users, four items, nine observations over five distinct preference
/// pairs. In full mode the graph has 5 + 4*3 + 2*4 = 25 vertices and
/// 9 + 2*4*3 = 33 edges.
inline ObservationSet five_user_fixture() {
    return ObservationSet::from_unsorted({
        {0, 0, 1},  // u0: A > B
        {1, 3, 1},  // u1: D > B
        {2, 0, 1},  // u2: A > B
        {2, 3, 2},  // u2: D > C
        {2, 2, 1},  // u2: C > B
        {3, 0, 1},  // u3: A > B
        {3, 3, 2},  // u3: D > C
        {3, 0, 3},  // u3: A > D
        {4, 3, 2},  // u4: D > C
    });
}

constexpr std::uint32_t kFiveUserCount = 5;
constexpr std::uint32_t kFiveItemCount = 4;
constexpr std::uint32_t kTwoItemUserCount = 3;
constexpr std::uint32_t kTwoItemItemCount = 2;

}  // namespace grank::testing

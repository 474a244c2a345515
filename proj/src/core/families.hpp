// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/sets.hpp"

namespace csms {

/// {B(n, 1)} on the naturals, first `horizon` members.
Covering unit_balls(SpacePtr naturals, std::size_t horizon = 1024);

/// U_n = (n - 2^-n, n + 1 + 2^-n-1) on the halfline, as single balls.
Covering staggered_halfline(SpacePtr halfline, std::size_t horizon = 16);

/// Component n of shrink_intervals split into two members: 2n misses the
/// left endpoint L_n = n - alpha 2^-n, 2n+1 misses R_n = n + alpha 2^-n.
/// Each member is a truncated union of `balls_per_member` balls whose
/// radii increase towards the endpoint.
Covering half_open_shrink(SpacePtr shrink, std::size_t components = 8,
                          std::size_t balls_per_member = 48);

/// L_n (left) or R_n as a Point of shrink_intervals.
Point shrink_endpoint(SpacePtr shrink, long n, bool left);

}  // namespace csms

// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_VERSION_HPP
#define LTN_VERSION_HPP

namespace ltn {
inline constexpr const char* kVersion = "0.1.0";
}

#endif

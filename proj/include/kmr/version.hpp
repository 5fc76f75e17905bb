// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace kmr {

// Bumping either value invalidates previously released instance ids; the
// deterministic sampler (kRngName) is part of the versioned contract.
inline constexpr const char* kGeneratorVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kRngName = "splitmix64-v1";

}  // namespace kmr

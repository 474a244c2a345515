// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "core/cantor_embed.hpp"
#include "core/lebesgue.hpp"

namespace csms {

enum ExitCode { kExitOk = 0, kExitSpec = 1, kExitFailure = 2 };

struct JobResult {
  Json report;
  int exit_code = kExitOk;
  std::string summary;  // one line for humans
};

/// Runs one command on a payload.  Flags are an object of strings or
/// numbers: eps, q, level, depth, budget, horizon, seed, samples,
/// precision.  Throws SpecError on malformed input.
JobResult run_job(const std::string& command, const Json& payload, const Json& flags);

/// Replays every certificate of a report with no search.
JobResult check_report(const Json& report);

/// Payload parsers, shared with tests.
SpacePtr space_from(const Json& payload);
Covering covering_from(SpacePtr space, const Json& payload);
FunctionPtr function_from(SpacePtr domain, const Json& spec);
OpenSetCode open_set_from(SpacePtr space, const Json& spec);
SepClosedCode sepclosed_from(SpacePtr space, const Json& spec);

}  // namespace csms

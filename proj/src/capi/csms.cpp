// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "csms/csms.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/jobs.hpp"

struct csms_report {
  std::string json;
  std::string summary;
  int exit_code = 0;
};

struct csms_space {
  csms::SpacePtr space;
};

namespace {

thread_local std::string last_error;

csms_status fail(csms_status s, const std::string& what) {
  last_error = what;
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

csms::Json parse(const char* text, const char* what) {
  try {
    return csms::Json::parse(text);
  } catch (const csms::Json::parse_error& e) {
    throw csms::SpecError(std::string(what) + ": " + e.what());
  }
}

template <typename F>
csms_status guarded(F&& body) {
  try {
    return body();
  } catch (const csms::SpecError& e) {
    return fail(CSMS_ERR_SPEC, e.what());
  } catch (const csms::Json::exception& e) {
    return fail(CSMS_ERR_SPEC, e.what());
  } catch (const csms::OperationError& e) {
    return fail(CSMS_ERR_SPEC, e.kind() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CSMS_ERR_SPEC, e.what());
  } catch (const std::exception& e) {
    return fail(CSMS_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* csms_version(void) { return "0.1.0"; }

const char* csms_last_error(void) { return last_error.c_str(); }

csms_status csms_job_run(const char* command, const char* payload_json, const char* flags_json,
                         csms_report** out) {
  if (!command || !payload_json || !out) return fail(CSMS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    csms::Json payload = parse(payload_json, "payload");
    csms::Json flags = flags_json ? parse(flags_json, "flags") : csms::Json::object();
    csms::JobResult r = csms::run_job(command, payload, flags);
    *out = new csms_report{r.report.dump(2) + "\n", r.summary, r.exit_code};
    return CSMS_OK;
  });
}

const char* csms_report_json(const csms_report* report) { return report ? report->json.c_str() : ""; }

int csms_report_exit_code(const csms_report* report) { return report ? report->exit_code : 1; }

const char* csms_report_summary(const csms_report* report) {
  return report ? report->summary.c_str() : "";
}

void csms_report_free(csms_report* report) { delete report; }

csms_status csms_space_open(const char* spec_json, csms_space** out) {
  if (!spec_json || !out) return fail(CSMS_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new csms_space{csms::catalog(parse(spec_json, "space spec"))};
    return CSMS_OK;
  });
}

csms_status csms_space_distance(const csms_space* space, const char* a_json, const char* b_json,
                                unsigned precision, char** lower, char** upper) {
  if (!space || !a_json || !b_json || !lower || !upper) return fail(CSMS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const csms::Space& s = *space->space;
    csms::CodePoint a = s.parse_literal(parse(a_json, "first point"));
    csms::CodePoint b = s.parse_literal(parse(b_json, "second point"));
    if (!s.admits(a) || !s.admits(b)) throw csms::SpecError("literal is not a code point of " + s.name());
    csms::Bracket br = csms::distance_bracket(s, a, b, precision);
    *lower = dup(br.lo.str());
    *upper = dup(br.hi.str());
    return CSMS_OK;
  });
}

void csms_space_free(csms_space* space) { delete space; }

void csms_string_free(char* s) { std::free(s); }

}  // extern "C"

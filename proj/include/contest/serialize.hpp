#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "contest/sim.hpp"
#include "contest/submission.hpp"

namespace contest {

inline constexpr int kTruthSchemaVersion = 1;

/// Contestant-facing CSV: header `id,x1,...,xd,y`, one row per subject,
/// values strictly 0/1, LF line endings.
void write_dataset_csv(const Dataset& data, std::ostream& out);
/// Throws ParseError naming the offending line and column.
Dataset read_dataset_csv(std::istream& in);

/// Latent confounder indicators, `id,c1,...,cm`. Instructor-only.
void write_latent_csv(const BinaryMatrix& confounders, std::ostream& out);

/// Canonical JSON (sorted keys, no insignificant whitespace). `salt` is
/// omitted when empty, which is the form the commitment digest covers.
std::string truth_to_json(const GroundTruth& truth, std::string_view salt = {});

struct SealedTruth {
  GroundTruth truth;
  std::string salt;
};
SealedTruth truth_from_json(std::string_view text);

std::string submission_to_json(const Submission& submission);
/// Accepts the JSON form or whitespace-separated indices; the plain form is
/// labelled `fallback_team`.
Submission submission_from_text(std::string_view text, const std::string& fallback_team);

std::string read_file(const std::string& path);
/// Writes atomically enough for CLI use: truncate then write, LF only.
void write_file(const std::string& path, std::string_view contents);

}  // namespace contest

#pragma once

// Seeded synthetic corpora: random ground-truth tables with perturbed
// predictions (box jitter, structure edits, content typos, misses and
// spurious detections).

#include <cstdint>
#include <string>

namespace tabscore {

struct FixtureOptions {
  int pages = 20;
  int max_rows = 4;
  int max_cols = 4;
  double span_probability = 0.2;
  double page_width = 1000.0;
  double page_height = 1400.0;
};

/// JSONL corpus text; identical for identical seed and options on every
/// platform (no standard-library distributions are involved).
std::string generate_fixture(std::uint64_t seed, const FixtureOptions& options = {});

}  // namespace tabscore

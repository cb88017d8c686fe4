#pragma once

#include <cstdint>

#include "examsched/instance.hpp"

namespace examsched {

// Seeded registrar data at liberal-arts-college scale. Course popularity and
// meeting-time popularity are Zipf-like; the distributions are made up for
// testing and are not fitted to any real registrar.
struct SyntheticConfig {
  int students = 4000;
  int courses = 560;
  int faculty = 300;
  int coordinated = 12;     // multi-section courses with a common exam
  int multi_section = 60;   // most popular courses get 2..5 sections
  int min_courses = 4;
  int max_courses = 5;
  double lab_fraction = 0.08;  // sections with an extra lab meeting
  std::uint64_t seed = 1;
};

SourceFiles generate_sources(const SyntheticConfig& config);
Instance generate_instance(const SyntheticConfig& config, const Weights& weights = survey_weights());

}  // namespace examsched

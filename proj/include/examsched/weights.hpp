#pragma once

#include <string>

namespace examsched {

// Penalty per inconvenience. Student overlap, back-to-back and night-to-morning
// penalties apply per occurrence; the window and faculty penalties apply at
// most once per person.
template <typename Scalar>
struct BasicWeights {
  Scalar overlap{};
  Scalar b2b{};
  Scalar pm_to_am{};
  Scalar three_in_24{};
  Scalar four_in_48{};
  Scalar faculty_overlap{};
  Scalar faculty_b2b{};

  template <typename Other>
  BasicWeights<Other> cast() const {
    return {static_cast<Other>(overlap),     static_cast<Other>(b2b),
            static_cast<Other>(pm_to_am),    static_cast<Other>(three_in_24),
            static_cast<Other>(four_in_48),  static_cast<Other>(faculty_overlap),
            static_cast<Other>(faculty_b2b)};
  }

  bool non_negative() const {
    return overlap >= 0 && b2b >= 0 && pm_to_am >= 0 && three_in_24 >= 0 && four_in_48 >= 0 &&
           faculty_overlap >= 0 && faculty_b2b >= 0;
  }

  friend bool operator==(const BasicWeights&, const BasicWeights&) = default;
};

using Weights = BasicWeights<double>;

// Invented defaults; the survey only ranks inconveniences ordinally.
inline Weights survey_weights() { return {100, 10, 8, 30, 20, 25, 5}; }

}  // namespace examsched

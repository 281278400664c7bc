#include "okd/detection.hpp"

#include <cmath>

namespace okd {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Bit0: return "bit0";
    case Classification::Bit1: return "bit1";
    case Classification::Error: return "error";
  }
  return "error";
}

Classification classify(double v, double epsilon) {
  if (std::abs(v - 1.0) <= epsilon) return Classification::Bit0;
  if (std::abs(v + 1.0) <= epsilon) return Classification::Bit1;
  return Classification::Error;
}

Detection detect(const FieldPaird& fields, double epsilon) {
  return detection_from_intensities(std::norm(fields(0)), std::norm(fields(1)),
                                    interference(fields), epsilon);
}

Detection detection_from_intensities(double i_a, double i_b, double in, double epsilon) {
  Detection d;
  d.intensity_a = i_a;
  d.intensity_b = i_b;
  d.interference = in;
  if (i_a + i_b > 0.0) {
    d.visibility = okd::visibility(i_a, i_b);
    d.classification = classify(d.visibility, epsilon);
  } else {
    d.visibility = 0.0;
    d.classification = Classification::Error;
  }
  return d;
}

}  // namespace okd

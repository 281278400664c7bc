#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "okd/optics.hpp"

namespace okd {

enum class Bit : std::uint8_t { Zero = 0, One = 1 };

/// A key bit, or nullopt for an error/discarded slot.
using MaybeBit = std::optional<Bit>;

inline Bit flip(Bit b) { return b == Bit::Zero ? Bit::One : Bit::Zero; }
inline int to_int(Bit b) { return static_cast<int>(b); }
inline Bit bit_from_int(int v) { return (v & 1) ? Bit::One : Bit::Zero; }

/// +1 maps to Bit0, -1 maps to Bit1.
enum class Classification : std::uint8_t { Bit0, Bit1, Error };

std::string_view to_string(Classification c);

/// Maps a visibility to Bit0/Bit1 when it lies within epsilon of +1/-1.
Classification classify(double visibility, double epsilon);

inline MaybeBit to_bit(Classification c) {
  switch (c) {
    case Classification::Bit0: return Bit::Zero;
    case Classification::Bit1: return Bit::One;
    case Classification::Error: break;
  }
  return std::nullopt;
}

struct Detection {
  double intensity_a{0};
  double intensity_b{0};
  double visibility{0};
  double interference{0};
  Classification classification{Classification::Error};
};

/// Reads a detector pair; index 0 of `fields` is detector a.
Detection detect(const FieldPaird& fields, double epsilon);

/// Builds a detection from raw intensities. The interference term is taken as
/// given; zero total intensity yields an Error classification with visibility 0.
Detection detection_from_intensities(double i_a, double i_b, double interference,
                                     double epsilon);

}  // namespace okd

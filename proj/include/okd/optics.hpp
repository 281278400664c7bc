#pragma once

// Transfer-matrix model of the double phase-controlled Mach-Zehnder channel.
//
// Row convention for every 2-vector and 2x2 operator in this header:
//   index 0 ("upper") is the line that receives the control phases phi2/psi2,
//   index 1 ("lower") is the line that receives the base phases phi1/psi1.
//
// The channel runs
//   Bob:   [BS] -> diag(phi2, phi1)                  (outbound launch)
//   Alice: [BS][BS] -> diag(psi2, psi1)               (detect/re-split, encode)
//   Bob:   [BS]                                       (return detection)
// so the full round trip is [BS][psi][BS][BS][phi][BS].

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace okd {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using FieldPair = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
using Transfer2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

using FieldPaird = FieldPair<double>;
using Transfer2d = Transfer2<double>;

template <typename Scalar>
constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

template <typename Scalar>
constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

/// Tolerance used for phase equality modulo 2*pi.
inline constexpr double kPhaseTolerance = 1e-9;

/// Reduces an angle to [0, 2*pi).
template <typename Scalar>
Scalar wrap_phase(Scalar phase) {
  Scalar r = std::fmod(phase, kTwoPi<Scalar>);
  if (r < Scalar(0)) r += kTwoPi<Scalar>;
  if (r >= kTwoPi<Scalar>) r -= kTwoPi<Scalar>;
  return r;
}

/// Shortest signed distance a - b on the circle, in (-pi, pi].
template <typename Scalar>
Scalar phase_distance(Scalar a, Scalar b) {
  Scalar d = wrap_phase(a - b);
  if (d > kPi<Scalar>) d -= kTwoPi<Scalar>;
  return d;
}

template <typename Scalar>
bool phases_equal(Scalar a, Scalar b, Scalar tol = Scalar(kPhaseTolerance)) {
  return std::abs(phase_distance(a, b)) <= tol;
}

/// Shifter settings of one slot. Radians throughout.
///
/// `channel_offset` is the environment-induced relative path phase. It rides
/// on the upper line during the outbound pass (together with phi2) and on the
/// lower line during the return pass (together with psi1); the return pass
/// travels the physical lines swapped by Alice's double beam splitter.
template <typename Scalar = double>
struct PhaseFrame {
  Scalar phi1{0};
  Scalar phi2{0};
  Scalar psi1{0};
  Scalar psi2{0};
  Scalar channel_offset{0};

  PhaseFrame reduced() const {
    return {wrap_phase(phi1), wrap_phase(phi2), wrap_phase(psi1), wrap_phase(psi2),
            wrap_phase(channel_offset)};
  }
};

using PhaseFramed = PhaseFrame<double>;

template <typename Scalar = double>
FieldPair<Scalar> source_field(Complex<Scalar> amplitude = Complex<Scalar>(1)) {
  return FieldPair<Scalar>(amplitude, Complex<Scalar>(0));
}

template <typename Scalar = double>
Transfer2<Scalar> beam_splitter() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  const Complex<Scalar> i(0, 1);
  Transfer2<Scalar> bs;
  bs << Complex<Scalar>(s), i * s,
        i * s, Complex<Scalar>(s);
  return bs;
}

template <typename Scalar>
Transfer2<Scalar> phase_stage(Scalar upper_phase, Scalar lower_phase) {
  Transfer2<Scalar> m = Transfer2<Scalar>::Zero();
  m(0, 0) = std::polar(Scalar(1), upper_phase);
  m(1, 1) = std::polar(Scalar(1), lower_phase);
  return m;
}

/// Bob's shifters plus the outbound channel offset.
template <typename Scalar>
Transfer2<Scalar> bob_stage(const PhaseFrame<Scalar>& f) {
  return phase_stage(f.phi2 + f.channel_offset, f.phi1);
}

/// Alice's shifters plus the return channel offset.
template <typename Scalar>
Transfer2<Scalar> alice_stage(const PhaseFrame<Scalar>& f) {
  return phase_stage(f.psi2, f.psi1 + f.channel_offset);
}

/// Fields on the two lines after Bob's encoder (what a tap sees outbound).
template <typename Scalar>
Transfer2<Scalar> outbound_operator(const PhaseFrame<Scalar>& f) {
  return bob_stage(f) * beam_splitter<Scalar>();
}

/// One-way MZI seen at Alice's detectors (E5, E6).
template <typename Scalar>
Transfer2<Scalar> forward_mzi(const PhaseFrame<Scalar>& f) {
  return beam_splitter<Scalar>() * outbound_operator(f);
}

/// Return-pass fields on the two lines after Alice's encoder (E7, E8).
template <typename Scalar>
Transfer2<Scalar> channel_operator(const PhaseFrame<Scalar>& f) {
  const Transfer2<Scalar> bs = beam_splitter<Scalar>();
  return alice_stage(f) * bs * bs * outbound_operator(f);
}

/// Full round trip seen at Bob's return detectors (E9, E10).
template <typename Scalar>
Transfer2<Scalar> round_trip_operator(const PhaseFrame<Scalar>& f) {
  return beam_splitter<Scalar>() * channel_operator(f);
}

template <typename Scalar>
FieldPair<Scalar> outbound_fields(const PhaseFrame<Scalar>& f, const FieldPair<Scalar>& input) {
  return outbound_operator(f) * input;
}

template <typename Scalar>
FieldPair<Scalar> forward_fields(const PhaseFrame<Scalar>& f, const FieldPair<Scalar>& input) {
  return forward_mzi(f) * input;
}

template <typename Scalar>
FieldPair<Scalar> channel_fields(const PhaseFrame<Scalar>& f, const FieldPair<Scalar>& input) {
  return channel_operator(f) * input;
}

template <typename Scalar>
FieldPair<Scalar> round_trip(const PhaseFrame<Scalar>& f, const FieldPair<Scalar>& input) {
  return round_trip_operator(f) * input;
}

template <typename Scalar>
Scalar intensity(const Complex<Scalar>& e) {
  return std::norm(e);
}

template <typename Scalar>
Scalar total_intensity(const FieldPair<Scalar>& f) {
  return std::norm(f(0)) + std::norm(f(1));
}

/// Normalized detector imbalance (i_b - i_a) / (i_a + i_b).
/// Throws std::domain_error when both intensities vanish.
template <typename Scalar>
Scalar visibility(Scalar i_a, Scalar i_b) {
  if (i_a < Scalar(0) || i_b < Scalar(0)) {
    throw std::domain_error("visibility: negative intensity");
  }
  const Scalar sum = i_a + i_b;
  if (!(sum > Scalar(0))) {
    throw std::domain_error("visibility: undefined for zero total intensity");
  }
  return (i_b - i_a) / sum;
}

/// Visibility of a detector pair, index 0 as detector a.
template <typename Scalar>
Scalar visibility(const FieldPair<Scalar>& f) {
  return visibility(std::norm(f(0)), std::norm(f(1)));
}

/// Intensity of the coherent sum |upper + lower|^2.
template <typename Scalar>
Scalar interference(const FieldPair<Scalar>& f) {
  return std::norm(f(0) + f(1));
}

template <typename Scalar>
bool is_finite(const Transfer2<Scalar>& m) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

/// Largest elementwise deviation of M * M^H from the identity.
template <typename Scalar>
Scalar unitarity_error(const Transfer2<Scalar>& m) {
  const Transfer2<Scalar> d = m * m.adjoint() - Transfer2<Scalar>::Identity();
  return d.cwiseAbs().maxCoeff();
}

}  // namespace okd

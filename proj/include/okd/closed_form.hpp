#pragma once

// Analytic forms of the composite MZI operators and their observables.
// These are written out term by term, independent of the matrix products in
// optics.hpp, so the two routes can be checked against each other.

#include <cmath>
#include <complex>

#include "okd/optics.hpp"

namespace okd::closed_form {

namespace detail {
template <typename Scalar>
Complex<Scalar> cis(Scalar x) {
  return std::polar(Scalar(1), x);
}
}  // namespace detail

/// Exponent of the upper-line round-trip term: psi2 + phi1.
template <typename Scalar>
Scalar alpha(const PhaseFrame<Scalar>& f) {
  return f.psi2 + f.phi1;
}

/// Exponent of the lower-line round-trip term: psi1 + phi2 (plus both channel passes).
template <typename Scalar>
Scalar beta(const PhaseFrame<Scalar>& f) {
  return f.psi1 + f.phi2 + Scalar(2) * f.channel_offset;
}

/// Round-trip operator.
template <typename Scalar>
Transfer2<Scalar> round_trip_matrix(const PhaseFrame<Scalar>& f) {
  using detail::cis;
  const Complex<Scalar> i(0, 1);
  const Complex<Scalar> ea = cis(alpha(f));
  const Complex<Scalar> eb = cis(beta(f));
  const Scalar h = Scalar(0.5);
  Transfer2<Scalar> m;
  m << -h * (ea + eb), h * i * (ea - eb),
        h * i * (eb - ea), -h * (ea + eb);
  return m;
}

/// One-way MZI seen at Alice.
template <typename Scalar>
Transfer2<Scalar> forward_matrix(const PhaseFrame<Scalar>& f) {
  using detail::cis;
  const Complex<Scalar> i(0, 1);
  const Complex<Scalar> e2 = cis(f.phi2 + f.channel_offset);
  const Complex<Scalar> e1 = cis(f.phi1);
  const Scalar h = Scalar(0.5);
  Transfer2<Scalar> m;
  m << h * (e2 - e1), h * i * (e2 + e1),
        h * i * (e2 + e1), -h * (e2 - e1);
  return m;
}

/// In-channel return fields (E7, E8).
template <typename Scalar>
Transfer2<Scalar> channel_matrix(const PhaseFrame<Scalar>& f) {
  using detail::cis;
  const Complex<Scalar> i(0, 1);
  const Complex<Scalar> ea = cis(alpha(f));
  const Complex<Scalar> eb = cis(beta(f));
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  Transfer2<Scalar> m;
  m << -s * ea, s * i * ea,
        s * i * eb, -s * eb;
  return m;
}

template <typename Scalar>
Scalar forward_visibility(const PhaseFrame<Scalar>& f) {
  return std::cos(f.phi2 + f.channel_offset - f.phi1);
}

template <typename Scalar>
Scalar forward_interference(const PhaseFrame<Scalar>& f) {
  return Scalar(1) + std::sin(f.phi2 + f.channel_offset - f.phi1);
}

template <typename Scalar>
Scalar return_visibility(const PhaseFrame<Scalar>& f) {
  return -std::cos(alpha(f) - beta(f));
}

template <typename Scalar>
Scalar channel_interference(const PhaseFrame<Scalar>& f) {
  return Scalar(1) - std::sin(alpha(f) - beta(f));
}

}  // namespace okd::closed_form

#pragma once

#include <cstdint>
#include <string>

#include "gaugecert/arep.hpp"
#include "gaugecert/decompose.hpp"
#include "gaugecert/gauge.hpp"

namespace gaugecert {

/// FNV-1a 64-bit hash as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Canonical JSON text (sorted keys, exact rationals as "num/den" strings with
// decimal approximations alongside). Each serializer carries every field an
// independent checker needs.
std::string to_json(const TriVector& x);
std::string to_json(const UCertificate& c);
std::string to_json(const ARepresentative& rep);
std::string to_json(const VCertificate& c);
std::string to_json(const DecompositionCertificate& c);
std::string to_json(const SplitResult& s);
std::string to_json(const GaugeInterval& g);
std::string to_json(const UpperBound& u);
std::string to_json(const LowerBound& l);
std::string to_json(const QuotientWitness& w);

/// Inverse of to_json for the certificate types re-checked from files.
/// Throw PreconditionError on malformed input.
DecompositionCertificate decomposition_from_json(const std::string& text);
VCertificate vcertificate_from_json(const std::string& text);

/// Digest of the canonical JSON of a certificate.
template <class T>
std::string digest(const T& value) {
  return fnv1a_hex(to_json(value));
}

}  // namespace gaugecert

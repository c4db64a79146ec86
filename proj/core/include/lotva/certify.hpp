#pragma once

// Recursive VA certificates for injective compressed LOTs, and a verifier
// that re-derives every node from lot-core, complex and linkage primitives.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lotva/lot.hpp"

namespace lotva {

// Quotient component counts of lk+ and lk- after contracting the fixed
// part. A relative forest on n quotient nodes with c components has n - c
// corners, so the counts pin the forest down up to which corners it uses.
struct ForestWitness {
  std::size_t plus_components = 0;
  std::size_t minus_components = 0;
  friend bool operator==(const ForestWitness&, const ForestWitness&) = default;
};

namespace cert {

struct Base {
  std::size_t edges = 0;
  friend bool operator==(const Base&, const Base&) = default;
};

struct BoundaryReduction {
  EdgeId edge = 0;
  std::string outer;
  friend bool operator==(const BoundaryReduction&, const BoundaryReduction&) = default;
};

struct FreeDecomposition {
  EdgeSet left;
  EdgeSet right;
  std::string shared;
  friend bool operator==(const FreeDecomposition&, const FreeDecomposition&) = default;
};

struct PrimeWeightTest {
  EdgeSet flipped;
  ForestWitness witness;
  friend bool operator==(const PrimeWeightTest&, const PrimeWeightTest&) = default;
};

struct ChainStep {
  EdgeSet sublot;      // edge ids of the quotient current at this step
  std::string vertex;  // its collapse vertex
  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct CompleteSet {
  std::vector<ChainStep> chain;
  std::vector<EdgeSet> sublots;  // in the annotated lot
  EdgeSet flipped;
  ForestWitness witness;
  friend bool operator==(const CompleteSet&, const CompleteSet&) = default;
};

}  // namespace cert

// Children: one for a boundary reduction, left then right for a free
// decomposition, one per sub-LOT for a complete set, none otherwise.
struct Certificate {
  std::variant<cert::Base, cert::BoundaryReduction, cert::FreeDecomposition, cert::PrimeWeightTest, cert::CompleteSet>
      node;
  std::vector<Certificate> children;

  std::size_t size() const;  // number of nodes
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct FailureReport {
  std::string stage;  // "prime-wt" or "complete-set" or "dispatch"
  std::string lot;    // the lot where the search gave up, as text
  std::string message;
};

struct CertifyResult {
  std::optional<Certificate> certificate;
  std::optional<FailureReport> failure;
  explicit operator bool() const noexcept { return certificate.has_value(); }
};

CertifyResult certify_va(const Lot& lot);

struct VerifyVerdict {
  bool accepted = true;
  std::string check;    // name of the first failing check
  std::string message;
  std::string path;     // node path from the root, like "root/0/0"
};

VerifyVerdict verify_certificate(const Lot& lot, const Certificate& cert);

std::string to_text(const Certificate& cert, std::string_view lot_name = {});
Certificate parse_certificate(std::string_view text);

}  // namespace lotva

#pragma once

// JSON link specs in, JSON run reports out.
//
// Spec document:
//   { "ambient_n": 3,
//     "K": <entry>, "L": <entry>,
//     "method": "main" | "corollary" | "join-full" | "join-reduced" | "oracle",
//     "grid": {"k": 64, "l": 64, "u": 32},          optional, 0 = default
//     "tol": 1e-8, "max_level": 4,                   optional
//     "thresholds": {"min_alpha": 0.01, ...},        optional
//     "kernel_mode": "closed_form" | "numeric",      optional
//     "hemisphere": false }                          optional
//
// Catalog entries are objects with a "kind" key; see catalog_schemas().

#include "linking/errors.hpp"
#include "linking/linking_engine.hpp"
#include "linking/manifold_catalog.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace linking {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "linking 1.0.0";

/// Malformed or invalid spec document.
class SpecError : public Error {
 public:
  using Error::Error;
};

enum class SpecMethod { main, corollary, join_full, join_reduced, oracle };

const char* to_string(SpecMethod method);
SpecMethod parse_spec_method(const std::string& name);

struct LinkSpec {
  int ambient_n = 3;
  CatalogEntry K;
  CatalogEntry L;
  SpecMethod method = SpecMethod::main;
  EvaluationOptions options;
};

/// Context for entries that draw random coefficients without their own seed.
struct SpecContext {
  std::uint64_t seed = 1;
};

/// Parses text; malformed JSON raises SpecError with "line L, column C".
LinkSpec parse_link_spec(const std::string& text, const SpecContext& ctx = {});
LinkSpec link_spec_from_json(const Json& doc, const SpecContext& ctx = {});
Json to_json(const LinkSpec& spec);

/// `ambient_n` sizes random Fourier curves.
CatalogEntry catalog_entry_from_json(const Json& doc, int ambient_n = 3,
                                     const SpecContext& ctx = {});
Json to_json(const CatalogEntry& entry);

/// Builds both manifolds and checks k + l = n - 1 and the oracle restrictions.
struct BuiltLink {
  Submanifold K;
  Submanifold L;
};
BuiltLink build_link(const LinkSpec& spec);

/// Dispatches to the evaluator named by the spec.
LinkingReport run_link_spec(const LinkSpec& spec);
LinkingReport run_link_spec(const LinkSpec& spec, const BuiltLink& link);

/// Report document: version, spec echo, report fields; wall time only if given.
Json run_report(const LinkSpec& spec, const LinkingReport& report,
                std::optional<double> wall_seconds = std::nullopt);
Json to_json(const LinkingReport& report);

/// Kinds with their parameter names and types.
Json catalog_schemas();

/// Byte offset into text -> "line L, column C" (both 1-based).
std::string describe_position(const std::string& text, std::size_t byte_offset);

}  // namespace linking

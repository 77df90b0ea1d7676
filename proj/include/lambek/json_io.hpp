#pragma once

// Structured records for certificates and reports. Formulae are stored in
// their canonical text form; every top-level record carries "schema".

#include <json.hpp>

#include "lambek/compiler.hpp"
#include "lambek/derivation.hpp"
#include "lambek/prover.hpp"
#include "lambek/reductions.hpp"
#include "lambek/star.hpp"

namespace lambek {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "lambek/1";

Json to_json(const Sequent& s);
Sequent sequent_from_json(const Json& j);

/// Node list in dependency order (premises before conclusions), so shared
/// subderivations are written once.
Json derivation_to_json(const DerivationPtr& d);
/// Throws std::invalid_argument on malformed input. The result is not
/// checked; run check_derivation on it.
DerivationPtr derivation_from_json(const Json& j);

Json to_json(const ProveResult& r, const Sequent& s, bool with_certificate);
Json to_json(const CompiledGrammar& cg);
Json to_json(const LambekGrammar& g);
Json to_json(const EquivalenceReport& r);
Json to_json(const ApproxReport& r);
Json to_json(const InstanceReport& r);
Json to_json(const Alt2Report& r);
Json to_json(const ProbeReport& r);

}  // namespace lambek

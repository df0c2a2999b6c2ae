#pragma once

#include <string>

#include "json.hpp"

#include "gupdirac/format.hpp"
#include "gupdirac/oracle.hpp"
#include "gupdirac/params.hpp"
#include "gupdirac/qpt.hpp"
#include "gupdirac/spectrum.hpp"
#include "gupdirac/wavefunction.hpp"

namespace gupdirac {

// JSON keeps doubles at round-trip precision, so parse(dump(x)) == x for every record.
void to_json(nlohmann::json& j, const FamilyIndex& f);
void from_json(const nlohmann::json& j, FamilyIndex& f);
void to_json(nlohmann::json& j, const Member& m);
void from_json(const nlohmann::json& j, Member& m);
void to_json(nlohmann::json& j, const Level& l);
void from_json(const nlohmann::json& j, Level& l);

void to_json(nlohmann::json& j, const EigenReport& r);
void from_json(const nlohmann::json& j, EigenReport& r);

void to_json(nlohmann::json& j, const CriticalPoint& c);
void from_json(const nlohmann::json& j, CriticalPoint& c);
void to_json(nlohmann::json& j, const CriticalField& c);
void from_json(const nlohmann::json& j, CriticalField& c);

void to_json(nlohmann::json& j, const CurveValue& c);
void from_json(const nlohmann::json& j, CurveValue& c);
void to_json(nlohmann::json& j, const LevelCurvePoint& p);
void from_json(const nlohmann::json& j, LevelCurvePoint& p);
void to_json(nlohmann::json& j, const Figure1Dataset& ds);
void from_json(const nlohmann::json& j, Figure1Dataset& ds);

void to_json(nlohmann::json& j, const Kink& k);
void to_json(nlohmann::json& j, const Event& e);

void to_json(nlohmann::json& j, const CharacteristicLengths& c);
void to_json(nlohmann::json& j, const RadialProfile& f);
/// Quantum numbers, energy, coefficients and profile parameters (no samples).
void to_json(nlohmann::json& j, const SpinorState& s);

} // namespace gupdirac

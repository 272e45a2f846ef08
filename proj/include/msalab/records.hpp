#pragma once

// JSON forms of the domain types.  Every record written by the CLI is one of
// these objects on its own line; from_json restores the value exactly
// (doubles are printed in shortest round-trip form, non-finite values as the
// strings "inf", "-inf" and "nan").

#include <optional>
#include <string>

#include <json.hpp>

#include "msalab/classify.hpp"
#include "msalab/experiment.hpp"
#include "msalab/msa.hpp"
#include "msalab/resolvent.hpp"

namespace msalab {

using Json = nlohmann::json;

Json number_to_json(double v);
double number_from_json(const Json& j);

void to_json(Json& j, const Point1& p);
void from_json(const Json& j, Point1& p);
void to_json(Json& j, const Point2& p);
void from_json(const Json& j, Point2& p);
void to_json(Json& j, const Box1& b);
void from_json(const Json& j, Box1& b);
void to_json(Json& j, const Box2& b);
void from_json(const Json& j, Box2& b);
void to_json(Json& j, const Interval& i);
void from_json(const Json& j, Interval& i);

void to_json(Json& j, const DistributionSpec& s);
void from_json(const Json& j, DistributionSpec& s);
void to_json(Json& j, const InteractionSpec& s);
void from_json(const Json& j, InteractionSpec& s);
void to_json(Json& j, const DisorderSample& s);
void from_json(const Json& j, DisorderSample& s);

void to_json(Json& j, const ScheduleParams& p);
void from_json(const Json& j, ScheduleParams& p);
void to_json(Json& j, const ScaleSchedule& s);
void from_json(const Json& j, ScaleSchedule& s);
void to_json(Json& j, const Constraint& c);
void from_json(const Json& j, Constraint& c);
void to_json(Json& j, const ConstraintReport& r);
void from_json(const Json& j, ConstraintReport& r);

void to_json(Json& j, const NsResult& r);
void from_json(const Json& j, NsResult& r);
void to_json(Json& j, const ResonanceResult& r);
void from_json(const Json& j, ResonanceResult& r);
void to_json(Json& j, const CnrResult& r);
void from_json(const Json& j, CnrResult& r);
void to_json(Json& j, const NtResult& r);
void from_json(const Json& j, NtResult& r);
void to_json(Json& j, const NtPairResult& r);
void from_json(const Json& j, NtPairResult& r);
void to_json(Json& j, const Lemma32Report& r);
void from_json(const Json& j, Lemma32Report& r);
void to_json(Json& j, const ClassificationReport& r);
void from_json(const Json& j, ClassificationReport& r);

void to_json(Json& j, const SeparatedSubset& s);
void from_json(const Json& j, SeparatedSubset& s);
void to_json(Json& j, const SubboxClass& s);
void from_json(const Json& j, SubboxClass& s);
void to_json(Json& j, const CounterReport& r);
void from_json(const Json& j, CounterReport& r);
void to_json(Json& j, const Lemma45Report& r);
void from_json(const Json& j, Lemma45Report& r);

void to_json(Json& j, const Placement& p);
void from_json(const Json& j, Placement& p);
void to_json(Json& j, const EventSpec& s);
void from_json(const Json& j, EventSpec& s);
void to_json(Json& j, const WilsonInterval& w);
void from_json(const Json& j, WilsonInterval& w);
void to_json(Json& j, const EstimateRecord& r);
void from_json(const Json& j, EstimateRecord& r);
void to_json(Json& j, const Certificate& c);
void from_json(const Json& j, Certificate& c);
void to_json(Json& j, const WegnerRow& r);
void from_json(const Json& j, WegnerRow& r);
void to_json(Json& j, const DecayFit& f);
void from_json(const Json& j, DecayFit& f);
void to_json(Json& j, const MassStatistics& m);
void from_json(const Json& j, MassStatistics& m);
void to_json(Json& j, const RecoverySweep& r);
void from_json(const Json& j, RecoverySweep& r);
void to_json(Json& j, const ProbeTrial& t);
void from_json(const Json& j, ProbeTrial& t);

/// Spectrum record: eigenvalues plus the residual and orthogonality checks.
Json spectrum_record(const FiniteOperator& op, const SpectralData& spectral);
/// Green's column record with values keyed by operator row.
Json green_record(const FiniteOperator& op, const GreenColumn& column);
Json recovery_record(const RecoveryResult& r);

}  // namespace msalab

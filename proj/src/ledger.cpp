#include "heis/ledger.hpp"

#include <algorithm>
#include <array>

namespace heis {

namespace {

const std::array<LedgerEntry, 16> kLedger{{
    {"p1-abnormal-angle",
     {"p1-abnormal"},
     LedgerStatus::Corrected,
     "h1^2 + h2^2 = 1, h3 = 1, h1 = cos theta, h2 = sin theta, theta = t + theta0",
     "h3 = -1, h = (cos theta, sin theta, -1), theta = theta0 - t, u = (cos theta, sin theta, 1)",
     "the maximizing ray needs h3 < 0; with h3 = -1 the canonical system gives dtheta/dt = h3 = -1, and only "
     "this angle reproduces the x, y closed form; RK4 agreement <= 1e-12"},
    {"p1-abnormal-trajectory",
     {"p1-abnormal"},
     LedgerStatus::Confirmed,
     "x = sin(t - theta0) + sin theta0, y = cos(t - theta0) - cos theta0, z = (t + sin t)/2",
     "same",
     "exact solution of the flow with the corrected covector angle; RK4 agreement <= 1e-12"},
    {"p1-abnormal-z-rate",
     {"p1-abnormal"},
     LedgerStatus::Corrected,
     "dz/dt = -y h1/sqrt(h1^2 + h2^2) + x h2/sqrt(h1^2 + h2^2) + 1",
     "dz/dt = (-y u1 + x u2)/2 + 1 with u = (h1, h2)/sqrt(h1^2 + h2^2)",
     "the frame field X1 = d/dx - (y/2) d/dz carries the factor 1/2; the z closed form (t + sin t)/2 "
     "only integrates the corrected rate"},
    {"p1-normal-normalization",
     {"p1-normal"},
     LedgerStatus::Corrected,
     "h1^2 + h2^2 - h3^2 = 1, H = 1/2",
     "h3^2 - h1^2 - h2^2 = 1 with h3 < 0, H = (h1^2 + h2^2 - h3^2)/2 = -1/2",
     "the parametrization h3 = -cosh a, (h1, h2) = sinh a (cos theta, sin theta) and the unit-maximizer "
     "condition force the timelike normalization"},
    {"p1-normal-trajectory",
     {"p1-normal"},
     LedgerStatus::Confirmed,
     "x = tanh a (sin theta0 - sin(theta0 - t cosh a)), y = tanh a (cos(theta0 - t cosh a) - cos theta0), "
     "z = t (1/cosh a + cosh a)/2 + tanh^2 a sin(t cosh a)/2",
     "same",
     "RK4 agreement <= 1e-12 over |a| <= 2, t <= 10"},
    {"normal-maximum-value",
     {"p1-normal", "p2-normal"},
     LedgerStatus::Corrected,
     "max h_u = sqrt(quadratic form of h) + 1 at the unit maximizer",
     "max h_u = 0 at u = mirrored h; the length rate sqrt(form(u)) is 1",
     "h_u is positively 1-homogeneous in u, so a finite maximum is 0; the radicand of the reference value "
     "is negative in the case where it is stated"},
    {"p1-normal-radicand",
     {"p1-normal"},
     LedgerStatus::Corrected,
     "u = (h1, h2, -h3)/sqrt(h1^2 + h2^2 - h3^2)",
     "u = (h1, h2, -h3)/sqrt(h3^2 - h1^2 - h2^2) = (h1, h2, -h3) under unit normalization",
     "h1^2 + h2^2 - h3^2 < 0 in the case considered, so the reference radicand is not real"},
    {"p2-normal-radicand",
     {"p2-normal"},
     LedgerStatus::Corrected,
     "u = (-h1, h2, h3)/sqrt(h2^2 + h3^2 - h1^2), normalization h2^2 + h3^2 - h1^2 = 1",
     "u = (-h1, h2, h3) with h1^2 - h2^2 - h3^2 = 1, h1 < 0",
     "the case requires h2^2 + h3^2 - h1^2 < 0; brute-force maximization over the cone confirms the adopted "
     "maximizer"},
    {"p2-normal-covector-h2",
     {"p2-normal"},
     LedgerStatus::Corrected,
     "dh2/dt = h1 h3 (Hamiltonian system listing)",
     "dh2/dt = h3 u1 = -h1 h3",
     "follows from the canonical system db/dt = c u1/2 with u1 = -h1; agrees with the coordinate listing "
     "next to it"},
    {"p2-normal-hamiltonian",
     {"p2-normal"},
     LedgerStatus::Corrected,
     "H = (h1^2 + h2^2 - h3^2)/2, H = 1/2",
     "conserved H = (h2^2 + h3^2 - h1^2)/2 = -1/2",
     "h1^2 + h2^2 - h3^2 drifts along the corrected flow; h1^2 - h2^2 - h3^2 is conserved to round-off"},
    {"p2-normal-trajectory",
     {"p2-normal"},
     LedgerStatus::Confirmed,
     "x = (h2^0 (cosh s - 1) - h1^0 sinh s)/h3, y = (h2^0 sinh s - h1^0 (cosh s - 1))/h3, "
     "z = ((2 h3^2 - (h1^0)^2 + (h2^0)^2) s + ((h1^0)^2 - (h2^0)^2) sinh s)/(2 h3^2), s = h3 t",
     "same, evaluated through the light-cone combinations h1 -+ h2 for stability",
     "symbolic check against the corrected flow; RK4 agreement <= 1e-7 at step 1e-4"},
    {"p2-normal-lightlike-chart",
     {"p2-normal"},
     LedgerStatus::Unused,
     "h1 = -R cosh b, h2 = R sinh b, h3 = R",
     "(h1^0, h2^0, h3) with h1^0 = -sqrt(1 + (h2^0)^2 + h3^2)",
     "the chart satisfies h2^2 + h3^2 - h1^2 = 0, i.e. it is lightlike and misses the timelike covectors"},
    {"p2-abnormal-parametrization",
     {"p2-abnormal"},
     LedgerStatus::Unused,
     "natural parametrization u3 = -1, u1^2 = u2^2 + 1, h3 = -1",
     "u = (sqrt(h2^2 + h3^2), h2, h3) with the covector's own magnitude",
     "the closed form is stated for the covector-scaled control; time is not arc length"},
    {"p2-abnormal-z",
     {"p2-abnormal"},
     LedgerStatus::Confirmed,
     "z = (h3 t + sinh(h3 t))/2, no dependence on C = arsinh(h2^0/h3)",
     "same",
     "dz/dt = h3 (cosh(|h3| t) + 1)/2 for every C; RK4 agreement <= 1e-7"},
    {"abnormal-timelike-covector",
     {"p1-abnormal", "p2-abnormal"},
     LedgerStatus::Corrected,
     "strictly timelike past covector, nu = 0: no maximum",
     "maximum 0 attained only at u = 0 (trivial)",
     "u.h < 0 for every nonzero admissible u, so the supremum 0 is attained at the origin of the cone"},
    {"p2-attainable-mirror",
     {"p2-attainable-set"},
     LedgerStatus::Flagged,
     "0 < |z| <= (t + sinh t)/2, t = arcosh((x^2 - y^2)/2 + 1)",
     "applied literally; points with x < 0 pass the test but are unreachable",
     "dx/dt = u1 >= 0 on every admissible trajectory; distance queries report such points as undefined"},
}};

}  // namespace

std::span<const LedgerEntry> discrepancy_ledger() { return kLedger; }

std::vector<LedgerEntry> ledger_entries_for(std::string_view family) {
  std::vector<LedgerEntry> out;
  for (const LedgerEntry& e : kLedger) {
    if (std::find(e.families.begin(), e.families.end(), family) != e.families.end()) out.push_back(e);
  }
  return out;
}

std::string to_string(LedgerStatus status) {
  switch (status) {
    case LedgerStatus::Corrected:
      return "corrected";
    case LedgerStatus::Confirmed:
      return "confirmed";
    case LedgerStatus::Unused:
      return "unused";
    case LedgerStatus::Flagged:
      return "flagged";
  }
  return "flagged";
}

nlohmann::ordered_json to_json(const LedgerEntry& entry) {
  nlohmann::ordered_json families = nlohmann::ordered_json::array();
  for (const std::string_view f : entry.families) families.push_back(std::string(f));
  return {{"id", std::string(entry.id)},
          {"families", families},
          {"status", to_string(entry.status)},
          {"reference", std::string(entry.reference)},
          {"adopted", std::string(entry.adopted)},
          {"evidence", std::string(entry.evidence)}};
}

nlohmann::ordered_json ledger_json() {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const LedgerEntry& e : kLedger) list.push_back(to_json(e));
  return {{"version", 1}, {"entries", list}};
}

}  // namespace heis

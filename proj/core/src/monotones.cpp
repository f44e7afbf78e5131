#include "resmono/monotones.hpp"

#include "resmono/coherence.hpp"
#include "resmono/extension.hpp"
#include "resmono/measurement.hpp"
#include "resmono/ree.hpp"

namespace resmono {

namespace {

BoundInterval exact(double v, std::string how) {
  BoundInterval b;
  b.lower = b.upper = v;
  b.lower_certificate = std::move(how);
  b.converged = true;
  return b;
}

// Upper bound from a feasible point; the lower end is nonnegativity.
BoundInterval upper_only(double v, std::string how) {
  BoundInterval b;
  b.lower = 0.0;
  b.upper = v;
  b.lower_certificate = std::move(how);
  return b;
}

DensityMatrix two_party(const DensityMatrix& rho, const char* who) {
  if (!rho.has_cut()) throw std::invalid_argument(std::string(who) + ": state has no bipartition");
  return rho.as_two_party();
}

std::vector<Monotone> build() {
  using P = Property;
  std::vector<Monotone> out;
  out.push_back({"ree", "relative entropy of PPT entanglement D_PPT", {P::kNormalized, P::kAsymptoticallyContinuous}, true,
                 [](const DensityMatrix& rho, std::uint64_t) { return ree_ppt(rho); }});
  out.push_back({"mree",
                 "PPT-measured relative entropy of PPT entanglement over the default family",
                 {P::kStronglySuperadditive, P::kNormalized, P::kAsymptoticallyContinuous},
                 true,
                 [](const DensityMatrix& rho, std::uint64_t seed) {
                   return measured_ree(rho, default_family(rho.bipartition(), 8, seed));
                 }});
  out.push_back({"cr",
                 "relative entropy of coherence C_r",
                 {P::kAdditive, P::kStronglySuperadditive, P::kNormalized, P::kAsymptoticallyContinuous},
                 false,
                 [](const DensityMatrix& rho, std::uint64_t) { return exact(c_r(rho), "closed form"); }});
  out.push_back({"q", "quintessential coherence C_r(trim(rho))", {}, false,
                 [](const DensityMatrix& rho, std::uint64_t) { return exact(quintessential(rho), "closed form"); }});
  out.push_back({"cf",
                 "coherence of formation C_f",
                 {P::kAdditive, P::kNormalized, P::kAsymptoticallyContinuous},
                 false,
                 [](const DensityMatrix& rho, std::uint64_t seed) {
                   CfOptions o;
                   o.seed = seed;
                   const CoherenceOfFormation c = c_f(rho, o);
                   if (c.exact) return exact(c.value, "optimizer and brute-force grid agree within 1e-4");
                   return upper_only(c.value, "decomposition value; lower end is nonnegativity");
                 }});
  out.push_back({"sq",
                 "squashed entanglement E_sq",
                 {P::kAdditive, P::kStronglySuperadditive, P::kNormalized, P::kAsymptoticallyContinuous},
                 true,
                 [](const DensityMatrix& rho, std::uint64_t seed) {
                   ExtensionOptions o;
                   o.seed = seed;
                   return upper_only(squashed_upper(two_party(rho, "sq"), o).value,
                                     "explicit extension; lower end is nonnegativity");
                 }});
  out.push_back({"cemi",
                 "conditional entanglement of mutual information E_I",
                 {P::kAdditive, P::kStronglySuperadditive, P::kNormalized, P::kAsymptoticallyContinuous},
                 true,
                 [](const DensityMatrix& rho, std::uint64_t seed) {
                   ExtensionOptions o;
                   o.ext_dims = {2, 2};
                   o.seed = seed;
                   return upper_only(cemi_upper(two_party(rho, "cemi"), o).value,
                                     "explicit extension; lower end is nonnegativity");
                 }});
  return out;
}

}  // namespace

const char* to_string(Property p) {
  switch (p) {
    case Property::kAdditive:
      return "additive";
    case Property::kStronglySuperadditive:
      return "strongly-superadditive";
    case Property::kNormalized:
      return "normalized";
    case Property::kAsymptoticallyContinuous:
      return "asymptotically-continuous";
  }
  return "?";
}

void Monotone::require(Property p) const {
  if (!declares(p)) throw ConfigError("monotone '" + name + "' does not declare the property " + to_string(p));
}

const std::vector<Monotone>& monotones() {
  static const std::vector<Monotone> registry = build();
  return registry;
}

const Monotone& find_monotone(const std::string& name) {
  for (const Monotone& m : monotones())
    if (m.name == name) return m;
  throw ConfigError("unknown monotone '" + name + "'");
}

}  // namespace resmono

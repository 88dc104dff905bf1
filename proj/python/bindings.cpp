#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thetalab/bidouble.hpp"
#include "thetalab/legendre.hpp"
#include "thetalab/verifier.hpp"

namespace py = pybind11;
using namespace thetalab;

namespace {

PeriodMatrix period(const CMatrix& tau) { return PeriodMatrix(tau); }

SurfaceSpec surface(const CMatrix& tau, const std::array<cplx, 3>& coeffs) {
  return SurfaceSpec(PeriodMatrix(tau), coeffs);
}

ThetaCharacteristic characteristic(const std::vector<int>& a2, const std::vector<int>& b2) {
  if (b2.empty()) return ThetaCharacteristic::even(a2);
  return ThetaCharacteristic::halves(a2, b2);
}

}  // namespace

PYBIND11_MODULE(_thetalab, m) {
  m.doc() = "Theta functions, canonical maps of theta divisors and exact minor identities";

  static py::exception<Error> error(m, "ThetalabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def(
      "theta",
      [](const CVector& z, const CMatrix& tau, const std::vector<int>& a2, const std::vector<int>& b2) {
        return theta_value(z, period(tau), characteristic(a2, b2));
      },
      py::arg("z"), py::arg("tau"), py::arg("a2"), py::arg("b2") = std::vector<int>{},
      "theta[a2/2, b2/2](z, tau)");
  m.def(
      "theta_jet",
      [](const CVector& z, const CMatrix& tau, const std::vector<int>& a2) {
        const ThetaJet j = theta_jet(z, period(tau), characteristic(a2, {}));
        return py::make_tuple(j.value, j.gradient, j.hessian);
      },
      py::arg("z"), py::arg("tau"), py::arg("a2"), "(value, gradient, hessian)");
  m.def(
      "numerical_invariants",
      [](const std::vector<int>& type) {
        const auto inv = numerical_invariants(type);
        return py::make_tuple(inv.p_g, inv.q, inv.k_power);
      },
      py::arg("polarization_type"));

  m.def(
      "base_points",
      [](const CMatrix& tau, const std::array<cplx, 3>& coeffs) {
        std::vector<CVector> out;
        for (const auto& p : base_points(surface(tau, coeffs))) out.push_back(p.z);
        return out;
      },
      py::arg("tau"), py::arg("coeffs"));
  m.def(
      "sample_surface_point",
      [](const CMatrix& tau, const std::array<cplx, 3>& coeffs, std::uint64_t seed) {
        return sample_surface_point(surface(tau, coeffs), seed).z;
      },
      py::arg("tau"), py::arg("coeffs"), py::arg("seed"));
  m.def(
      "canonical_image",
      [](const CMatrix& tau, const std::array<cplx, 3>& coeffs, const CVector& z) {
        return canonical_image(surface(tau, coeffs), TorusPoint{z, 0.0}).coords;
      },
      py::arg("tau"), py::arg("coeffs"), py::arg("z"));
  m.def(
      "rank_ratio",
      [](const CMatrix& tau, const std::array<cplx, 3>& coeffs, const CVector& z) {
        return diff_rank_matrix(surface(tau, coeffs), TorusPoint{z, 0.0}).ratio();
      },
      py::arg("tau"), py::arg("coeffs"), py::arg("z"), "sigma4 / sigma1 of the differential matrix");
  m.def(
      "chordal_distance",
      [](const CVector& p, const CVector& q) { return chordal_distance(make_projective(p), make_projective(q)); },
      py::arg("p"), py::arg("q"));

  m.def(
      "legendre_x", [](cplx tau, cplx z) { return legendre_x(LegendreModel(tau), z); }, py::arg("tau"),
      py::arg("z"));
  m.def(
      "legendre_parameter", [](cplx tau) { return LegendreModel(tau).a_param; }, py::arg("tau"));
  m.def(
      "identity_ledger",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto& r : verify_identity_ledger(seed).records) {
          py::dict d;
          d["name"] = r.name;
          d["columns"] = r.columns;
          d["holds"] = r.holds;
          d["sign_flip"] = r.sign_flip;
          d["computed"] = r.computed.to_string();
          d["claimed"] = r.claimed.to_string();
          d["residual"] = r.residual.to_string();
          d["substitution_matches_expansion"] = r.substitution_matches_expansion;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 1);

  m.def(
      "canonical_sections",
      [](const Eigen::Vector4cd& p0, const Eigen::Vector4cd& p1) { return bidouble::canonical_sections(p0, p1); },
      py::arg("p0"), py::arg("p1"));

  m.def(
      "run",
      [](const std::string& config_json) {
        const auto cfg = verifier::RunConfig::from_json(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        const auto report = verifier::run(cfg);
        return report.to_json().dump();
      },
      py::arg("config_json"), "Runs the verifier and returns the report as a JSON string");
}

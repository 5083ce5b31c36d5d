#include "pshcheck/catalog.hpp"

namespace psh {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Psh: return "psh";
    case Label::NotPsh: return "not-psh";
    case Label::Harmonic: return "harmonic";
    case Label::SubharmonicOnly: return "subharmonic-only";
    case Label::Subharmonic: return "subharmonic";
    case Label::NotSubharmonic: return "not-subharmonic";
  }
  return "?";
}

std::string_view to_string(Smoothness s) { return s == Smoothness::C2 ? "C2" : "usc-only"; }
std::string_view to_string(Space s) { return s == Space::Complex ? "complex" : "real"; }

std::optional<Label> label_from_string(std::string_view text) {
  for (Label l : {Label::Psh, Label::NotPsh, Label::Harmonic, Label::SubharmonicOnly, Label::Subharmonic,
                  Label::NotSubharmonic})
    if (to_string(l) == text) return l;
  return std::nullopt;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"ball-quadratic", "abs(z1)^2 + abs(z2)^2", Space::Complex, 2, Label::Psh, Smoothness::C2,
       "|z|^2: Levi form is the identity."},
      {"remark-3.4", "abs(z1)^2 - abs(z2)^2", Space::Complex, 2, Label::NotPsh, Smoothness::C2,
       "|z1|^2 - |z2|^2: Levi form diag(1, -1); D_T at the identity frame is positive although u is not psh."},
      {"log-modulus", "log(abs(z1))", Space::Complex, 2, Label::Psh, Smoothness::UscOnly,
       "log|z1|: log of the modulus of a holomorphic function; -inf on {z1 = 0}."},
      {"log-quadric", "log(abs(z1^2 + z2^2))", Space::Complex, 2, Label::Psh, Smoothness::UscOnly,
       "log|z1^2 + z2^2|: log-modulus of a holomorphic polynomial."},
      {"log-shifted", "log(abs(z1 - 0.3))", Space::Complex, 2, Label::Psh, Smoothness::UscOnly,
       "log|z1 - 0.3|: log-modulus of a holomorphic function, singular on {z1 = 0.3}."},
      {"pluriharmonic-re-square", "re(z1^2)", Space::Complex, 2, Label::Harmonic, Smoothness::C2,
       "Re(z1^2): real part of a holomorphic function, Levi form vanishes."},
      {"max-log", "max(log(abs(z1)), log(abs(z2)))", Space::Complex, 2, Label::Psh, Smoothness::UscOnly,
       "max(log|z1|, log|z2|): maximum of psh functions; -inf only at the origin."},
      {"neg-ball-quadratic", "-(abs(z1)^2 + abs(z2)^2)", Space::Complex, 2, Label::NotPsh, Smoothness::C2,
       "-|z|^2: Levi form is minus the identity."},
      {"subharmonic-not-psh", "abs(z1)^2 - 0.5*abs(z2)^2", Space::Complex, 2, Label::SubharmonicOnly,
       Smoothness::C2, "|z1|^2 - |z2|^2/2: real Laplacian 2 > 0 but Levi eigenvalue -1/2."},
      {"ball-quadratic-c3", "abs(z1)^2 + abs(z2)^2 + abs(z3)^2", Space::Complex, 3, Label::Psh, Smoothness::C2,
       "|z|^2 on C^3."},
      {"hermitian-indefinite-c3", "abs(z1 + z2)^2 + abs(z2)^2 - 0.25*abs(z3)^2", Space::Complex, 3,
       Label::NotPsh, Smoothness::C2,
       "Hermitian form [[1,1,0],[1,2,0],[0,0,-1/4]]: one negative Levi eigenvalue."},
      {"x-quadratic", "x1^2 + x2^2 + x3^2 + x4^2", Space::Real, 4, Label::Subharmonic, Smoothness::C2,
       "|x|^2 on R^4: Laplacian 2m = 8."},
      {"x-saddle", "x1^2 - x2^2", Space::Real, 2, Label::Harmonic, Smoothness::C2, "x1^2 - x2^2: harmonic."},
      {"x-linear", "x1", Space::Real, 3, Label::Harmonic, Smoothness::C2, "x1 on R^3: harmonic."},
      {"x-neg-norm", "-sqrt(x1^2 + x2^2 + x3^2)", Space::Real, 3, Label::NotSubharmonic, Smoothness::UscOnly,
       "-|x| on R^3: sphere mean -r at the origin, superharmonic."},
      {"x-quartic", "x1^4", Space::Real, 3, Label::Subharmonic, Smoothness::C2, "x1^4: Laplacian 12 x1^2."},
      {"x-exp", "exp(x1)", Space::Real, 2, Label::Subharmonic, Smoothness::C2, "exp(x1): Laplacian exp(x1)."},
  };
  return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace psh

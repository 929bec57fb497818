#include "spinscale/hamiltonians/hamiltonians.hpp"

#include <nlohmann/json.hpp>

namespace spinscale::ham {

namespace {

// Pair terms either leave a basis state alone or flip both spins, so each
// (i, j) contributes a diagonal entry and one entry at b ^ mask_i ^ mask_j.
// With s = s_i s_j (product of the two spin signs of the source state):
//   3 IaIa - I.I   diagonal   double-flip
//   a = z          +s/2       -(1 - s)/4
//   a = x          -s/4       +(2 + s)/4
//   a = y          -s/4       -(1 + 2s)/4
void add_dipolar_pair(Matrix& h, Axis axis, double d, int i, int j, std::size_t dim) {
  const std::uint32_t flip = (1u << i) | (1u << j);
  for (std::uint32_t b = 0; b < dim; ++b) {
    const double s = spin_sign(b, i) * spin_sign(b, j);
    switch (axis) {
      case Axis::z:
        h(b, b) += d * 0.5 * s;
        h(b ^ flip, b) += -d * 0.25 * (1.0 - s);
        break;
      case Axis::x:
        h(b, b) += -d * 0.25 * s;
        h(b ^ flip, b) += d * 0.25 * (2.0 + s);
        break;
      case Axis::y:
        h(b, b) += -d * 0.25 * s;
        h(b ^ flip, b) += -d * 0.25 * (1.0 + 2.0 * s);
        break;
    }
  }
}

}  // namespace

Matrix dipolar_secular(const SpinSystem& system, Axis axis) {
  const std::size_t dim = system.dim();
  const RealMatrix& d = system.couplings();
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < system.n_spins(); ++i) {
    for (int j = i + 1; j < system.n_spins(); ++j) {
      if (d(i, j) != 0.0) add_dipolar_pair(h, axis, d(i, j), i, j, dim);
    }
  }
  return h;
}

Matrix zeeman(const SpinSystem& system) {
  const std::size_t dim = system.dim();
  Matrix h = Matrix::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    double e = 0.0;
    for (int i = 0; i < system.n_spins(); ++i) {
      e -= system.zeeman_offsets()(i) * 0.5 * spin_sign(b, i);
    }
    h(b, b) = e;
  }
  return h;
}

Matrix double_quantum(const SpinSystem& system) {
  const std::size_t dim = system.dim();
  const RealMatrix& d = system.couplings();
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < system.n_spins(); ++i) {
    for (int j = i + 1; j < system.n_spins(); ++j) {
      if (d(i, j) == 0.0) continue;
      const std::uint32_t flip = (1u << i) | (1u << j);
      for (std::uint32_t b = 0; b < dim; ++b) {
        const double s = spin_sign(b, i) * spin_sign(b, j);
        // IxIx - IyIy connects only aligned pairs: (1 + s)/4
        h(b ^ flip, b) += d(i, j) * 0.25 * (1.0 + s);
      }
    }
  }
  return h;
}

Matrix HamiltonianSpec::build(const SpinSystem& system) const {
  switch (kind) {
    case Kind::dipolar_secular:
      return scale * dipolar_secular(system, axis);
    case Kind::zeeman:
      return scale * zeeman(system);
    case Kind::double_quantum:
      return scale * double_quantum(system);
    case Kind::composite: {
      Matrix h = Matrix::Zero(system.dim(), system.dim());
      for (const auto& term : terms) h += term.build(system);
      return scale * h;
    }
  }
  throw ValidationError("HamiltonianSpec: unknown kind");
}

std::string axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

Axis axis_from_name(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw ValidationError("unknown axis '" + name + "'");
}

namespace {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::dipolar_secular: return "dipolar_secular";
    case Kind::zeeman: return "zeeman";
    case Kind::double_quantum: return "double_quantum";
    case Kind::composite: return "composite";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "dipolar_secular") return Kind::dipolar_secular;
  if (name == "zeeman") return Kind::zeeman;
  if (name == "double_quantum") return Kind::double_quantum;
  if (name == "composite") return Kind::composite;
  throw ValidationError("unknown hamiltonian kind '" + name + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const HamiltonianSpec& spec) {
  j = nlohmann::json{{"kind", kind_name(spec.kind)}, {"scale", spec.scale}};
  if (spec.kind == Kind::dipolar_secular) j["axis"] = axis_name(spec.axis);
  if (spec.kind == Kind::composite) j["terms"] = spec.terms;
}

void from_json(const nlohmann::json& j, HamiltonianSpec& spec) {
  spec.kind = kind_from_name(j.at("kind").get<std::string>());
  spec.scale = j.value("scale", 1.0);
  if (spec.kind == Kind::dipolar_secular) {
    spec.axis = axis_from_name(j.value("axis", "z"));
  }
  if (spec.kind == Kind::composite) {
    spec.terms = j.at("terms").get<std::vector<HamiltonianSpec>>();
  }
}

}  // namespace spinscale::ham

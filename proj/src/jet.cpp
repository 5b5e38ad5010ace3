#include "biform/jet.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace biform {

std::string format_coords(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

JetVec constant_jets(std::span<const double> x) { return JetVec(x.begin(), x.end()); }

std::vector<double> values(std::span<const Jet> x) {
  std::vector<double> r;
  r.reserve(x.size());
  for (const auto& j : x) r.push_back(j.value());
  return r;
}

void JetConfig::validate() const {
  if (!(fd_step > 0.0)) throw Error("JetConfig: fd_step must be positive");
  if (max_order < 3) throw Error("JetConfig: max_order must be at least 3");
  if (max_order > kJetSlots)
    throw Error("JetConfig: the jet engine supports max_order " + std::to_string(kJetSlots));
}

const char* mode_name(DiffMode mode) {
  return mode == DiffMode::TaylorJet ? "jet" : "fd";
}

JetVec derive(const DiffContext& ctx,
              const std::function<JetVec(const Jet& t, const DiffContext& inner)>& fn) {
  if (ctx.config.mode == DiffMode::CentralDifference) {
    const double h = ctx.config.fd_step;
    JetVec plus = fn(Jet(h), ctx);
    const JetVec minus = fn(Jet(-h), ctx);
    for (std::size_t i = 0; i < plus.size(); ++i) plus[i] = (plus[i] - minus[i]) / (2.0 * h);
    return plus;
  }
  const int slot = ctx.depth;
  if (slot >= ctx.config.max_order || slot >= kJetSlots)
    throw JetOrderError("derivative nesting exceeds jet order " +
                        std::to_string(ctx.config.max_order));
  JetVec out = fn(Jet::seed(slot), ctx.deeper());
  for (auto& v : out) v = v.extract(slot);
  return out;
}

}  // namespace biform

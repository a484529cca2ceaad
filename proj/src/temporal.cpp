#include "ltpal/temporal.hpp"

#include "ltpal/error.hpp"
#include "ltpal/pal.hpp"

namespace ltpal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

bool TemporalEvaluator::pal_at(const PalFormula& f, StateRef ref) {
  auto [it, inserted] = cache_.try_emplace(f.identity(), CacheEntry{f, {}});
  auto& entry = it->second;
  if (entry.by_layer.empty()) entry.by_layer.resize(ts_->layer_count());
  auto& slot = entry.by_layer[ref.layer];
  if (!slot) slot = pal_extension(ts_->layer(ref.layer), f);
  return (*slot)[ref.index];
}

// Values are indexed by suffix offset; offset size() is the empty path and
// is false for every formula.
std::vector<bool> TemporalEvaluator::eval(const ExecPath& path, const TemporalFormula& phi) {
  const std::size_t n = path.size();
  return std::visit(
      overloaded{
          [&](const tl::Leaf& l) {
            std::vector<bool> out(n);
            for (std::size_t k = 0; k < n; ++k) out[k] = pal_at(l.pal, path.at(k));
            return out;
          },
          [&](const tl::Not& x) {
            auto out = eval(path, x.sub);
            out.flip();
            return out;
          },
          [&](const tl::And& x) {
            auto out = eval(path, x.lhs);
            auto rhs = eval(path, x.rhs);
            for (std::size_t k = 0; k < n; ++k) out[k] = out[k] && rhs[k];
            return out;
          },
          [&](const tl::Next& x) {
            auto sub = eval(path, x.sub);
            std::vector<bool> out(n);
            for (std::size_t k = 0; k + 1 < n; ++k) out[k] = sub[k + 1];
            return out;
          },
          [&](const tl::Until& x) {
            auto lhs = eval(path, x.lhs);
            auto rhs = eval(path, x.rhs);
            std::vector<bool> out(n);
            bool later = false;
            for (std::size_t k = n; k-- > 0;) {
              later = rhs[k] || (lhs[k] && later);
              out[k] = later;
            }
            return out;
          },
      },
      phi.node().v);
}

std::vector<bool> TemporalEvaluator::trace(const ExecPath& path, const TemporalFormula& phi) {
  if (!is_valid_path(*ts_, path)) throw EvalError("path does not belong to the transition system");
  return eval(path, phi);
}

bool TemporalEvaluator::holds(const ExecPath& path, const TemporalFormula& phi) {
  if (path.empty()) return false;
  return trace(path, phi)[0];
}

bool tems(const TransitionSystem& ts, const ExecPath& path, const TemporalFormula& phi) {
  TemporalEvaluator ev(ts);
  return ev.holds(path, phi);
}

}  // namespace ltpal

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/matrix.hpp"
#include "cylcert/mpoly.hpp"

namespace cylcert {

/// Ring homomorphism given by one image per source variable. Images of
/// Laurent variables must be units of the target ring.
template <class C>
class RingHom {
 public:
  RingHom() = default;

  RingHom(CtxPtr source, CtxPtr target, std::vector<MPoly<C>> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_->size())
      throw ContextError("ring hom needs one image per source variable: got " +
                         std::to_string(images_.size()) + " for " + source_->describe());
    inverses_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (!images_[i].ctx()) images_[i] = MPoly<C>(target_) + images_[i];
      require_same_ctx(images_[i].ctx(), target_, "ring hom image");
      if (source_->laurent(i)) {
        inverses_[i] = images_[i].unit_inverse();
        if (!inverses_[i])
          throw NotUnitError("Laurent variable '" + source_->name(i) +
                             "' must map to a unit of the target ring");
      }
    }
  }

  static RingHom identity(const CtxPtr& ctx) {
    std::vector<MPoly<C>> imgs;
    for (std::size_t i = 0; i < ctx->size(); ++i) imgs.push_back(MPoly<C>::var(ctx, i));
    return RingHom(ctx, ctx, std::move(imgs));
  }

  /// Identity on every variable except the listed replacements (by name).
  static RingHom substitution(const CtxPtr& ctx,
                              const std::vector<std::pair<std::string, MPoly<C>>>& repl) {
    std::vector<MPoly<C>> imgs;
    for (std::size_t i = 0; i < ctx->size(); ++i) imgs.push_back(MPoly<C>::var(ctx, i));
    for (const auto& [name, img] : repl) imgs[ctx->index(name)] = img;
    return RingHom(ctx, ctx, std::move(imgs));
  }

  const CtxPtr& source() const { return source_; }
  const CtxPtr& target() const { return target_; }
  const std::vector<MPoly<C>>& images() const { return images_; }
  const MPoly<C>& image(std::size_t i) const { return images_.at(i); }
  const MPoly<C>& image(const std::string& name) const { return images_.at(source_->index(name)); }

  /// Applies the hom; when `trunc_var` is set, every intermediate product is
  /// truncated modulo trunc_var^trunc_order (valid for a non-Laurent variable).
  MPoly<C> apply(const MPoly<C>& p, std::optional<std::size_t> trunc_var = std::nullopt,
                 int trunc_order = 0) const {
    require_same_ctx(p.ctx(), source_, "apply_hom");
    const std::size_t n = source_->size();
    auto cut = [&](MPoly<C> q) {
      return trunc_var ? q.truncated(*trunc_var, trunc_order) : q;
    };
    std::vector<std::vector<MPoly<C>>> pos(n), neg(n);
    auto power = [&](std::size_t v, int e) -> const MPoly<C>& {
      auto& cache = e >= 0 ? pos[v] : neg[v];
      const MPoly<C>& base = e >= 0 ? images_[v] : *inverses_[v];
      const std::size_t k = static_cast<std::size_t>(e >= 0 ? e : -e);
      if (cache.empty()) cache.push_back(MPoly<C>::one(target_));
      while (cache.size() <= k) cache.push_back(cut(cache.back() * base));
      return cache[k];
    };
    MPoly<C> result(target_);
    for (const auto& [e, c] : p.terms()) {
      MPoly<C> term = MPoly<C>::constant(target_, c);
      for (std::size_t v = 0; v < n && !term.is_zero(); ++v) {
        if (e[v] == 0) continue;
        term = cut(term * power(v, e[v]));
      }
      result += term;
    }
    return result;
  }

 private:
  CtxPtr source_, target_;
  std::vector<MPoly<C>> images_;
  std::vector<std::optional<MPoly<C>>> inverses_;
};

template <class C>
MPoly<C> apply_hom(const RingHom<C>& h, const MPoly<C>& p) {
  return h.apply(p);
}

/// compose_hom(g, h) applies h first, then g.
template <class C>
RingHom<C> compose_hom(const RingHom<C>& g, const RingHom<C>& h) {
  if (!same_ctx(h.target(), g.source()))
    throw ContextError("compose_hom: target of inner hom " + h.target()->describe() +
                       " differs from source of outer hom " + g.source()->describe());
  std::vector<MPoly<C>> imgs;
  for (const auto& img : h.images()) imgs.push_back(g.apply(img));
  return RingHom<C>(h.source(), g.target(), std::move(imgs));
}

/// Determinant of the matrix of partials of h(vars[i]) with respect to vars[j].
template <class C>
MPoly<C> jacobian_det(const RingHom<C>& h, const std::vector<std::string>& vars) {
  const std::size_t k = vars.size();
  PolyMatrix<C> jac(k, std::vector<MPoly<C>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const MPoly<C>& img = h.image(vars[i]);
    for (std::size_t j = 0; j < k; ++j) jac[i][j] = img.derivative(h.target()->index(vars[j]));
  }
  return det(jac, h.target());
}

}  // namespace cylcert

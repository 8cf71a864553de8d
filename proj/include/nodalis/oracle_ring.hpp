#pragma once

#include <map>
#include <memory>
#include <vector>

#include "nodalis/chow.hpp"

namespace nodalis {

// Second evaluation strategy for pushforward_to_point, n <= 3: an explicit
// additive basis of the working ring of each tower space with a full
// multiplication table and integration vector, built stage by stage (blow up,
// record all products).  Shares only the domain types with the rule-based
// engine; the blowup structure constants are written here from scratch.
class AltEvaluator {
  public:
    explicit AltEvaluator(int n);
    ~AltEvaluator();

    // Exact integral over M_n.  Inputs carrying Q-symbols are rejected.
    UniversalPoly eval(const ChowExpr& e) const;

    int n() const { return n_; }

  private:
    int n_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

UniversalPoly alt_pushforward(const ChowExpr& e, int n);

}  // namespace nodalis

#pragma once

#include "kato/grid.hpp"

namespace kato {

// A bounded map C^in -> C^out with the Euclidean inner product on both sides
// (quadrature weights are folded into the outputs).
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual std::size_t input_size() const = 0;
    virtual std::size_t output_size() const = 0;
    virtual void apply(const cvec& in, cvec& out) const = 0;
    virtual void adjoint(const cvec& out, cvec& in) const = 0;
    // A* A y; operators with a cheaper fused form override this.
    virtual void normal(const cvec& in, cvec& out) const {
        cvec tmp;
        apply(in, tmp);
        adjoint(tmp, out);
    }
};

}  // namespace kato

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsk/diff/kernels.hpp"
#include "hsk/diff/tensor.hpp"

namespace hsk::diff {

enum class Op : std::uint8_t {
    Leaf,
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Greater,
    Select,
    Neg,
    Tanh,
    Sigmoid,
    Exp,
    Log,
    Sqrt,
    Abs,
    Square,
    Langevin,
    LangevinDeriv,
    MatMul,
    MatMulNT,
    SliceCols,
    ConcatCols,
    Sum,
    SumCols,
};

const char* op_name(Op op);

enum class LeafKind : std::uint8_t { Constant, Input, Parameter };

template <typename T>
class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
template <typename T>
class Var {
public:
    using value_type = T;

    Var() = default;
    Var(Graph<T>* g, int id) : graph_(g), id_(id) {}

    Graph<T>& graph() const { return *graph_; }
    int id() const { return id_; }
    bool valid() const { return graph_ != nullptr && id_ >= 0; }

    const Tensor<T>& value() const;
    std::size_t rows() const { return value().rows(); }
    std::size_t cols() const { return value().cols(); }

private:
    Graph<T>* graph_ = nullptr;
    int id_ = -1;
};

/// Tape of primitive operations recorded in topological order.
///
/// Nodes are evaluated eagerly as they are recorded. The whole tape can be
/// replayed with new input or parameter values via forward(); comparison
/// masks are themselves nodes, so a replay follows the same data-dependent
/// branches a fresh recording would.
template <typename T>
class Graph {
public:
    struct Node {
        Op op = Op::Leaf;
        LeafKind kind = LeafKind::Constant;
        bool needs_grad = false;
        std::array<int, 3> in{-1, -1, -1};
        std::vector<int> many;  // ConcatCols operands
        std::size_t start = 0;
        std::size_t len = 0;
        Tensor<T> value;
        Tensor<T> grad;
        std::string name;
    };

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;
    Graph(Graph&&) = default;
    Graph& operator=(Graph&&) = default;

    Var<T> constant(Tensor<T> value);
    Var<T> constant(T value) { return constant(Tensor<T>::scalar(value)); }
    Var<T> input(Tensor<T> value, std::string name = {});
    Var<T> parameter(Tensor<T> value, std::string name = {});

    const Tensor<T>& value(Var<T> v) const { return nodes_[check(v)].value; }
    const Tensor<T>& grad(Var<T> v) const;

    /// Replace the value of an input or parameter leaf. The graph becomes
    /// stale until forward() runs.
    void set_value(Var<T> leaf, Tensor<T> value);

    /// Re-evaluate every recorded node from the current leaf values.
    void forward();

    /// Assign `inputs` to the input leaves (in registration order), replay,
    /// and return the values of the nodes registered with mark_output().
    std::vector<Tensor<T>> forward(std::span<const Tensor<T>> inputs);

    void mark_output(Var<T> v) { outputs_.push_back(check(v)); }

    /// Reverse sweep from `out`, seeded with ones (or `seed`). Gradients of
    /// all nodes are reset first.
    void backward(Var<T> out);
    void backward(Var<T> out, const Tensor<T>& seed);

    bool evaluated() const { return evaluated_; }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

    std::vector<Var<T>> parameters();
    std::vector<Var<T>> inputs();

    // Recording entry points used by the free-function operators.
    Var<T> record_binary(Op op, Var<T> a, Var<T> b);
    Var<T> record_unary(Op op, Var<T> a);
    Var<T> record_select(Var<T> mask, Var<T> a, Var<T> b);
    Var<T> record_slice(Var<T> a, std::size_t start, std::size_t len);
    Var<T> record_concat(std::span<const Var<T>> parts);

private:
    int check(Var<T> v) const;
    Var<T> push(Node n);
    void evaluate(std::size_t id);
    void propagate(std::size_t id);

    std::vector<Node> nodes_;
    std::vector<int> inputs_;
    std::vector<int> outputs_;
    bool evaluated_ = true;
    bool has_grads_ = false;
};

template <typename T>
const Tensor<T>& Var<T>::value() const {
    return graph_->value(*this);
}

extern template class Graph<float>;
extern template class Graph<double>;

// ---------------------------------------------------------------------------
// Operators. Mixed Var/Tensor/scalar operands lift the constant side into the
// graph of the Var operand.

template <typename T>
Var<T> lift(const Var<T>& like, const Tensor<T>& t) {
    return like.graph().constant(t);
}

template <typename T>
const Tensor<T>& lift(const Tensor<T>&, const Tensor<T>& t) {
    return t;
}

#define HSK_VAR_BINARY(fn, op, opcode)                                                         \
    template <typename T>                                                                      \
    Var<T> fn(const Var<T>& a, const Var<T>& b) {                                              \
        return a.graph().record_binary(opcode, a, b);                                          \
    }                                                                                          \
    template <typename T>                                                                      \
    Var<T> fn(const Var<T>& a, const Tensor<T>& b) {                                           \
        return a.graph().record_binary(opcode, a, a.graph().constant(b));                      \
    }                                                                                          \
    template <typename T>                                                                      \
    Var<T> fn(const Tensor<T>& a, const Var<T>& b) {                                           \
        return b.graph().record_binary(opcode, b.graph().constant(a), b);                      \
    }                                                                                          \
    template <typename T>                                                                      \
    Var<T> fn(const Var<T>& a, T b) {                                                          \
        return a.graph().record_binary(opcode, a, a.graph().constant(b));                      \
    }                                                                                          \
    template <typename T>                                                                      \
    Var<T> fn(T a, const Var<T>& b) {                                                          \
        return b.graph().record_binary(opcode, b.graph().constant(a), b);                      \
    }

HSK_VAR_BINARY(add, +, Op::Add)
HSK_VAR_BINARY(sub, -, Op::Sub)
HSK_VAR_BINARY(mul, *, Op::Mul)
HSK_VAR_BINARY(div, /, Op::Div)
HSK_VAR_BINARY(minimum, min, Op::Min)
HSK_VAR_BINARY(maximum, max, Op::Max)
HSK_VAR_BINARY(greater, >, Op::Greater)
HSK_VAR_BINARY(matmul, matmul, Op::MatMul)
HSK_VAR_BINARY(matmul_nt, matmul_nt, Op::MatMulNT)

#undef HSK_VAR_BINARY

template <typename T> Var<T> operator+(const Var<T>& a, const Var<T>& b) { return add(a, b); }
template <typename T> Var<T> operator-(const Var<T>& a, const Var<T>& b) { return sub(a, b); }
template <typename T> Var<T> operator*(const Var<T>& a, const Var<T>& b) { return mul(a, b); }
template <typename T> Var<T> operator/(const Var<T>& a, const Var<T>& b) { return div(a, b); }
template <typename T> Var<T> operator+(const Var<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T> Var<T> operator-(const Var<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T> Var<T> operator*(const Var<T>& a, const Tensor<T>& b) { return mul(a, b); }
template <typename T> Var<T> operator/(const Var<T>& a, const Tensor<T>& b) { return div(a, b); }
template <typename T> Var<T> operator+(const Tensor<T>& a, const Var<T>& b) { return add(a, b); }
template <typename T> Var<T> operator-(const Tensor<T>& a, const Var<T>& b) { return sub(a, b); }
template <typename T> Var<T> operator*(const Tensor<T>& a, const Var<T>& b) { return mul(a, b); }
template <typename T> Var<T> operator/(const Tensor<T>& a, const Var<T>& b) { return div(a, b); }
template <typename T> Var<T> operator+(const Var<T>& a, T b) { return add(a, b); }
template <typename T> Var<T> operator-(const Var<T>& a, T b) { return sub(a, b); }
template <typename T> Var<T> operator*(const Var<T>& a, T b) { return mul(a, b); }
template <typename T> Var<T> operator/(const Var<T>& a, T b) { return div(a, b); }
template <typename T> Var<T> operator+(T a, const Var<T>& b) { return add(a, b); }
template <typename T> Var<T> operator-(T a, const Var<T>& b) { return sub(a, b); }
template <typename T> Var<T> operator*(T a, const Var<T>& b) { return mul(a, b); }
template <typename T> Var<T> operator/(T a, const Var<T>& b) { return div(a, b); }

template <typename T> Var<T> operator-(const Var<T>& a) { return a.graph().record_unary(Op::Neg, a); }
template <typename T> Var<T> neg(const Var<T>& a) { return -a; }
template <typename T> Var<T> tanh(const Var<T>& a) { return a.graph().record_unary(Op::Tanh, a); }
template <typename T> Var<T> sigmoid(const Var<T>& a) { return a.graph().record_unary(Op::Sigmoid, a); }
template <typename T> Var<T> exp(const Var<T>& a) { return a.graph().record_unary(Op::Exp, a); }
template <typename T> Var<T> log(const Var<T>& a) { return a.graph().record_unary(Op::Log, a); }
template <typename T> Var<T> sqrt(const Var<T>& a) { return a.graph().record_unary(Op::Sqrt, a); }
template <typename T> Var<T> abs(const Var<T>& a) { return a.graph().record_unary(Op::Abs, a); }
template <typename T> Var<T> square(const Var<T>& a) { return a.graph().record_unary(Op::Square, a); }
template <typename T> Var<T> langevin(const Var<T>& a) { return a.graph().record_unary(Op::Langevin, a); }
template <typename T> Var<T> langevin_deriv(const Var<T>& a) {
    return a.graph().record_unary(Op::LangevinDeriv, a);
}
template <typename T> Var<T> sum(const Var<T>& a) { return a.graph().record_unary(Op::Sum, a); }
template <typename T> Var<T> sum_cols(const Var<T>& a) { return a.graph().record_unary(Op::SumCols, a); }

template <typename T>
Var<T> select(const Var<T>& mask, const Var<T>& a, const Var<T>& b) {
    return a.graph().record_select(mask, a, b);
}
template <typename T>
Var<T> select(const Var<T>& mask, const Var<T>& a, T b) {
    return a.graph().record_select(mask, a, a.graph().constant(b));
}
template <typename T>
Var<T> select(const Var<T>& mask, T a, const Var<T>& b) {
    return b.graph().record_select(mask, b.graph().constant(a), b);
}
template <typename T>
Var<T> select(const Tensor<T>& mask, const Var<T>& a, const Var<T>& b) {
    return a.graph().record_select(a.graph().constant(mask), a, b);
}
template <typename T>
Var<T> select(const Tensor<T>& mask, const Var<T>& a, T b) {
    return a.graph().record_select(a.graph().constant(mask), a, a.graph().constant(b));
}
template <typename T>
Var<T> select(const Tensor<T>& mask, T a, const Var<T>& b) {
    return b.graph().record_select(b.graph().constant(mask), b.graph().constant(a), b);
}

template <typename T>
Var<T> slice_cols(const Var<T>& a, std::size_t start, std::size_t len) {
    return a.graph().record_slice(a, start, len);
}

template <typename T>
Var<T> concat_cols(std::span<const Var<T>> parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no inputs");
    return parts[0].graph().record_concat(parts);
}

template <typename T>
Var<T> concat_cols(std::initializer_list<Var<T>> parts) {
    std::vector<Var<T>> v(parts);
    return concat_cols(std::span<const Var<T>>(v));
}

}  // namespace hsk::diff

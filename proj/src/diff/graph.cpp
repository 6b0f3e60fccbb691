#include "hsk/diff/graph.hpp"

#include <cmath>
#include <string>

namespace hsk::diff {

const char* op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
        case Op::Min: return "min";
        case Op::Max: return "max";
        case Op::Greater: return "greater";
        case Op::Select: return "select";
        case Op::Neg: return "neg";
        case Op::Tanh: return "tanh";
        case Op::Sigmoid: return "sigmoid";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Abs: return "abs";
        case Op::Square: return "square";
        case Op::Langevin: return "langevin";
        case Op::LangevinDeriv: return "langevin_deriv";
        case Op::MatMul: return "matmul";
        case Op::MatMulNT: return "matmul_nt";
        case Op::SliceCols: return "slice_cols";
        case Op::ConcatCols: return "concat_cols";
        case Op::Sum: return "sum";
        case Op::SumCols: return "sum_cols";
    }
    return "?";
}

Precision parse_precision(const std::string& s) {
    if (s == "single" || s == "float" || s == "f32") return Precision::Single;
    if (s == "double" || s == "f64") return Precision::Double;
    throw ConfigError("unknown precision '" + s + "' (expected single or double)");
}

template <typename T>
int Graph<T>::check(Var<T> v) const {
    if (!v.valid() || &v.graph() != this || static_cast<std::size_t>(v.id()) >= nodes_.size()) {
        throw StateError("variable does not belong to this graph");
    }
    return v.id();
}

template <typename T>
Var<T> Graph<T>::push(Node n) {
    nodes_.push_back(std::move(n));
    const auto id = static_cast<int>(nodes_.size() - 1);
    if (nodes_.back().op != Op::Leaf) evaluate(static_cast<std::size_t>(id));
    return Var<T>(this, id);
}

template <typename T>
Var<T> Graph<T>::constant(Tensor<T> value) {
    if (!value.all_finite()) throw NonFiniteError("non-finite constant");
    Node n;
    n.kind = LeafKind::Constant;
    n.value = std::move(value);
    return push(std::move(n));
}

template <typename T>
Var<T> Graph<T>::input(Tensor<T> value, std::string name) {
    if (!value.all_finite()) throw NonFiniteError("non-finite input '" + name + "'");
    Node n;
    n.kind = LeafKind::Input;
    n.value = std::move(value);
    n.name = std::move(name);
    auto v = push(std::move(n));
    inputs_.push_back(v.id());
    return v;
}

template <typename T>
Var<T> Graph<T>::parameter(Tensor<T> value, std::string name) {
    if (!value.all_finite()) throw NonFiniteError("non-finite parameter '" + name + "'");
    Node n;
    n.kind = LeafKind::Parameter;
    n.needs_grad = true;
    n.value = std::move(value);
    n.name = std::move(name);
    return push(std::move(n));
}

template <typename T>
const Tensor<T>& Graph<T>::grad(Var<T> v) const {
    const int id = check(v);
    if (!has_grads_) throw StateError("no gradients available; call backward() first");
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.needs_grad) throw StateError("node " + std::to_string(id) + " does not carry a gradient");
    return n.grad;
}

template <typename T>
void Graph<T>::set_value(Var<T> leaf, Tensor<T> value) {
    Node& n = nodes_[static_cast<std::size_t>(check(leaf))];
    if (n.op != Op::Leaf || n.kind == LeafKind::Constant) {
        throw StateError("only input and parameter leaves can be reassigned");
    }
    if (!n.value.same_shape(value)) {
        throw ShapeError("set_value: expected " + shape_string(n.value) + ", got " + shape_string(value));
    }
    if (!value.all_finite()) throw NonFiniteError("non-finite value assigned to leaf '" + n.name + "'");
    n.value = std::move(value);
    evaluated_ = false;
    has_grads_ = false;
}

template <typename T>
void Graph<T>::forward() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].op != Op::Leaf) evaluate(i);
    }
    evaluated_ = true;
    has_grads_ = false;
}

template <typename T>
std::vector<Tensor<T>> Graph<T>::forward(std::span<const Tensor<T>> inputs) {
    if (inputs.size() != inputs_.size()) {
        throw ShapeError("forward: graph has " + std::to_string(inputs_.size()) + " inputs, got " +
                         std::to_string(inputs.size()));
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) set_value(Var<T>(this, inputs_[i]), inputs[i]);
    forward();
    std::vector<Tensor<T>> out;
    out.reserve(outputs_.size());
    for (int id : outputs_) out.push_back(nodes_[static_cast<std::size_t>(id)].value);
    return out;
}

template <typename T>
std::vector<Var<T>> Graph<T>::parameters() {
    std::vector<Var<T>> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].op == Op::Leaf && nodes_[i].kind == LeafKind::Parameter) {
            out.emplace_back(this, static_cast<int>(i));
        }
    }
    return out;
}

template <typename T>
std::vector<Var<T>> Graph<T>::inputs() {
    std::vector<Var<T>> out;
    for (int id : inputs_) out.emplace_back(this, id);
    return out;
}

template <typename T>
Var<T> Graph<T>::record_binary(Op op, Var<T> a, Var<T> b) {
    Node n;
    n.op = op;
    n.in = {check(a), check(b), -1};
    n.needs_grad = op != Op::Greater && (nodes_[static_cast<std::size_t>(n.in[0])].needs_grad ||
                                         nodes_[static_cast<std::size_t>(n.in[1])].needs_grad);
    return push(std::move(n));
}

template <typename T>
Var<T> Graph<T>::record_unary(Op op, Var<T> a) {
    Node n;
    n.op = op;
    n.in = {check(a), -1, -1};
    n.needs_grad = nodes_[static_cast<std::size_t>(n.in[0])].needs_grad;
    return push(std::move(n));
}

template <typename T>
Var<T> Graph<T>::record_select(Var<T> mask, Var<T> a, Var<T> b) {
    Node n;
    n.op = Op::Select;
    n.in = {check(mask), check(a), check(b)};
    n.needs_grad = nodes_[static_cast<std::size_t>(n.in[1])].needs_grad ||
                   nodes_[static_cast<std::size_t>(n.in[2])].needs_grad;
    return push(std::move(n));
}

template <typename T>
Var<T> Graph<T>::record_slice(Var<T> a, std::size_t start, std::size_t len) {
    Node n;
    n.op = Op::SliceCols;
    n.in = {check(a), -1, -1};
    n.start = start;
    n.len = len;
    n.needs_grad = nodes_[static_cast<std::size_t>(n.in[0])].needs_grad;
    return push(std::move(n));
}

template <typename T>
Var<T> Graph<T>::record_concat(std::span<const Var<T>> parts) {
    Node n;
    n.op = Op::ConcatCols;
    for (const auto& p : parts) {
        const int id = check(p);
        n.many.push_back(id);
        n.needs_grad = n.needs_grad || nodes_[static_cast<std::size_t>(id)].needs_grad;
    }
    return push(std::move(n));
}

template <typename T>
void Graph<T>::evaluate(std::size_t id) {
    Node& n = nodes_[id];
    auto in = [&](int k) -> const Tensor<T>& { return nodes_[static_cast<std::size_t>(n.in[k])].value; };
    using namespace kernels;
    switch (n.op) {
        case Op::Leaf: return;
        case Op::Add: n.value = binary(in(0), in(1), f_add<T>, "add"); break;
        case Op::Sub: n.value = binary(in(0), in(1), f_sub<T>, "sub"); break;
        case Op::Mul: n.value = binary(in(0), in(1), f_mul<T>, "mul"); break;
        case Op::Div: n.value = binary(in(0), in(1), f_div<T>, "div"); break;
        case Op::Min: n.value = binary(in(0), in(1), f_min<T>, "minimum"); break;
        case Op::Max: n.value = binary(in(0), in(1), f_max<T>, "maximum"); break;
        case Op::Greater: n.value = binary(in(0), in(1), f_gt<T>, "greater"); break;
        case Op::Select: n.value = kernels::select(in(0), in(1), in(2)); break;
        case Op::Neg: n.value = unary(in(0), f_neg<T>); break;
        case Op::Tanh: n.value = unary(in(0), f_tanh<T>); break;
        case Op::Sigmoid: n.value = unary(in(0), f_sigmoid<T>); break;
        case Op::Exp: n.value = unary(in(0), f_exp<T>); break;
        case Op::Log: n.value = unary(in(0), f_log<T>); break;
        case Op::Sqrt: n.value = unary(in(0), f_sqrt<T>); break;
        case Op::Abs: n.value = unary(in(0), f_abs<T>); break;
        case Op::Square: n.value = unary(in(0), f_square<T>); break;
        case Op::Langevin: n.value = unary(in(0), special::langevin<T>); break;
        case Op::LangevinDeriv: n.value = unary(in(0), special::langevin_deriv<T>); break;
        case Op::MatMul: n.value = kernels::matmul(in(0), in(1)); break;
        case Op::MatMulNT: n.value = kernels::matmul_nt(in(0), in(1)); break;
        case Op::SliceCols: n.value = kernels::slice_cols(in(0), n.start, n.len); break;
        case Op::ConcatCols: {
            std::vector<const Tensor<T>*> parts;
            parts.reserve(n.many.size());
            for (int k : n.many) parts.push_back(&nodes_[static_cast<std::size_t>(k)].value);
            n.value = kernels::concat_cols<T>(parts);
            break;
        }
        case Op::Sum: n.value = sum_all(in(0)); break;
        case Op::SumCols: n.value = kernels::sum_cols(in(0)); break;
    }
    if (!n.value.all_finite()) {
        throw NonFiniteError(std::string("non-finite value produced by ") + op_name(n.op) + " at node " +
                             std::to_string(id));
    }
}

template <typename T>
void Graph<T>::backward(Var<T> out) {
    const Tensor<T>& v = nodes_[static_cast<std::size_t>(check(out))].value;
    backward(out, Tensor<T>(v.rows(), v.cols(), T(1)));
}

template <typename T>
void Graph<T>::backward(Var<T> out, const Tensor<T>& seed) {
    const int root = check(out);
    if (!evaluated_) throw StateError("backward() called before forward() on a modified graph");
    Node& r = nodes_[static_cast<std::size_t>(root)];
    if (!r.value.same_shape(seed)) {
        throw ShapeError("backward: seed " + shape_string(seed) + " does not match output " + shape_string(r.value));
    }
    for (auto& n : nodes_) {
        if (!n.needs_grad) continue;
        if (n.grad.same_shape(n.value)) {
            n.grad.fill(T(0));
        } else {
            n.grad = Tensor<T>(n.value.rows(), n.value.cols());
        }
    }
    has_grads_ = true;
    if (!r.needs_grad) return;
    r.grad = seed;
    for (int i = root; i >= 0; --i) propagate(static_cast<std::size_t>(i));
}

template <typename T>
void Graph<T>::propagate(std::size_t id) {
    Node& n = nodes_[id];
    if (n.op == Op::Leaf || !n.needs_grad) return;
    const Tensor<T>& g = n.grad;
    const Tensor<T>& y = n.value;
    auto node_at = [&](int k) -> Node& { return nodes_[static_cast<std::size_t>(n.in[k])]; };
    using kernels::at;

    // Accumulate f(i, j) into operand k, reducing over broadcast dimensions.
    auto scatter = [&](int k, auto f) {
        Node& a = node_at(k);
        if (!a.needs_grad) return;
        const bool r1 = a.grad.rows() == 1 && g.rows() != 1;
        const bool c1 = a.grad.cols() == 1 && g.cols() != 1;
        for (std::size_t i = 0; i < g.rows(); ++i) {
            for (std::size_t j = 0; j < g.cols(); ++j) {
                a.grad(r1 ? 0 : i, c1 ? 0 : j) += f(i, j);
            }
        }
    };

    switch (n.op) {
        case Op::Leaf:
        case Op::Greater: return;
        case Op::Add:
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j); });
            scatter(1, [&](std::size_t i, std::size_t j) { return g(i, j); });
            break;
        case Op::Sub:
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j); });
            scatter(1, [&](std::size_t i, std::size_t j) { return -g(i, j); });
            break;
        case Op::Mul: {
            const auto& a = node_at(0).value;
            const auto& b = node_at(1).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * at(b, i, j); });
            scatter(1, [&](std::size_t i, std::size_t j) { return g(i, j) * at(a, i, j); });
            break;
        }
        case Op::Div: {
            const auto& a = node_at(0).value;
            const auto& b = node_at(1).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) / at(b, i, j); });
            scatter(1, [&](std::size_t i, std::size_t j) {
                const T bv = at(b, i, j);
                return -g(i, j) * at(a, i, j) / (bv * bv);
            });
            break;
        }
        case Op::Min:
        case Op::Max: {
            const auto& a = node_at(0).value;
            const auto& b = node_at(1).value;
            const bool is_min = n.op == Op::Min;
            // Forward picks b only on strict improvement; ties route to a.
            auto picks_b = [&](std::size_t i, std::size_t j) {
                return is_min ? at(b, i, j) < at(a, i, j) : at(b, i, j) > at(a, i, j);
            };
            scatter(0, [&](std::size_t i, std::size_t j) { return picks_b(i, j) ? T(0) : g(i, j); });
            scatter(1, [&](std::size_t i, std::size_t j) { return picks_b(i, j) ? g(i, j) : T(0); });
            break;
        }
        case Op::Select: {
            const auto& m = node_at(0).value;
            scatter(1, [&](std::size_t i, std::size_t j) { return at(m, i, j) != T(0) ? g(i, j) : T(0); });
            scatter(2, [&](std::size_t i, std::size_t j) { return at(m, i, j) != T(0) ? T(0) : g(i, j); });
            break;
        }
        case Op::Neg: scatter(0, [&](std::size_t i, std::size_t j) { return -g(i, j); }); break;
        case Op::Tanh:
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * (T(1) - y(i, j) * y(i, j)); });
            break;
        case Op::Sigmoid:
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * y(i, j) * (T(1) - y(i, j)); });
            break;
        case Op::Exp: scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * y(i, j); }); break;
        case Op::Log: {
            const auto& a = node_at(0).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) / a(i, j); });
            break;
        }
        case Op::Sqrt:
            // The subgradient at 0 is taken as 0 so that a vanishing loss does
            // not poison the tape with Inf * 0.
            scatter(0, [&](std::size_t i, std::size_t j) {
                return y(i, j) == T(0) ? T(0) : g(i, j) / (T(2) * y(i, j));
            });
            break;
        case Op::Abs: {
            const auto& a = node_at(0).value;
            scatter(0, [&](std::size_t i, std::size_t j) {
                const T x = a(i, j);
                return x > T(0) ? g(i, j) : (x < T(0) ? -g(i, j) : T(0));
            });
            break;
        }
        case Op::Square: {
            const auto& a = node_at(0).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return T(2) * a(i, j) * g(i, j); });
            break;
        }
        case Op::Langevin: {
            const auto& a = node_at(0).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * special::langevin_deriv(a(i, j)); });
            break;
        }
        case Op::LangevinDeriv: {
            const auto& a = node_at(0).value;
            scatter(0, [&](std::size_t i, std::size_t j) { return g(i, j) * special::langevin_deriv2(a(i, j)); });
            break;
        }
        case Op::MatMul: {
            Node& a = node_at(0);
            Node& b = node_at(1);
            if (a.needs_grad) kernels::accumulate_g_bt(a.grad, g, b.value);
            if (b.needs_grad) kernels::accumulate_at_g(b.grad, a.value, g);
            break;
        }
        case Op::MatMulNT: {
            Node& a = node_at(0);
            Node& w = node_at(1);
            if (a.needs_grad) kernels::accumulate_g_w(a.grad, g, w.value);
            if (w.needs_grad) kernels::accumulate_gt_a(w.grad, g, a.value);
            break;
        }
        case Op::SliceCols: {
            Node& a = node_at(0);
            if (!a.needs_grad) break;
            for (std::size_t i = 0; i < g.rows(); ++i) {
                for (std::size_t j = 0; j < g.cols(); ++j) a.grad(i, n.start + j) += g(i, j);
            }
            break;
        }
        case Op::ConcatCols: {
            std::size_t off = 0;
            for (int k : n.many) {
                Node& p = nodes_[static_cast<std::size_t>(k)];
                const std::size_t w = p.value.cols();
                if (p.needs_grad) {
                    for (std::size_t i = 0; i < g.rows(); ++i) {
                        for (std::size_t j = 0; j < w; ++j) p.grad(i, j) += g(i, off + j);
                    }
                }
                off += w;
            }
            break;
        }
        case Op::Sum: {
            Node& a = node_at(0);
            if (!a.needs_grad) break;
            const T s = g[0];
            for (auto& v : a.grad.values()) v += s;
            break;
        }
        case Op::SumCols: {
            Node& a = node_at(0);
            if (!a.needs_grad) break;
            for (std::size_t i = 0; i < a.grad.rows(); ++i) {
                for (std::size_t j = 0; j < a.grad.cols(); ++j) a.grad(i, j) += g(i, 0);
            }
            break;
        }
    }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace hsk::diff

// Serial versus OpenMP timings for the batch gradient and sequence evaluation.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "hsk/data/batching.hpp"
#include "hsk/physics/synth.hpp"
#include "hsk/training/gradient.hpp"
#include "hsk/training/train.hpp"

using namespace hsk;

namespace {

double best_ms(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool same) {
    std::printf("%-16s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hsk kernel benchmark"};
    std::size_t rows = 32, len = 256, d_g = 8, seqs = 16;
    int reps = 3;
    std::string arch = "GRU-P";
    app.add_option("--rows", rows, "Batch rows");
    app.add_option("--len", len, "Window length");
    app.add_option("--hidden-size", d_g);
    app.add_option("--sequences", seqs, "Sequences for the evaluation benchmark");
    app.add_option("--archetype", arch);
    app.add_option("--reps", reps);
    CLI11_PARSE(app, argc, argv);

    physics::SynthConfig sc;
    sc.count = std::max(rows, seqs);
    sc.length = 2 * len;
    const auto data = physics::synth_ja_dataset(sc);
    const auto norm = data::compute_norm_constants(data);
    std::vector<data::WindowRow> wr;
    for (std::size_t r = 0; r < rows; ++r) wr.push_back({r, {8, 24, 8 + len - 1, sc.length - 1}});
    const auto w = data::make_window<double>(data, wr, norm, 4);

    heads::ModelConfig mc;
    mc.archetype = parse_archetype(arch);
    mc.d_g = d_g;
    const auto m = heads::make_model<double>(mc, 1);
    std::printf("%s d_g=%zu params=%zu rows=%zu len=%zu threads=%d\n", arch.c_str(), d_g, m.param_count(), rows, len,
                omp_get_max_threads());

    training::LossGrad<double> a, b;
    const double ts = best_ms(reps, [&] { a = training::batch_gradient_serial(m, w, 0.0); });
    const double tp = best_ms(reps, [&] { b = training::batch_gradient(m, w, 0.0); });
    bool same = a.loss == b.loss;
    for (std::size_t i = 0; i < a.grads.size(); ++i) {
        same = same && std::equal(a.grads[i].values().begin(), a.grads[i].values().end(), b.grads[i].values().begin());
    }
    report("batch_gradient", ts, tp, same);

    const std::span<const data::MeasuredSequence> eval(data.data(), seqs);
    objectives::MetricReport ra, rb;
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double es = best_ms(reps, [&] { ra = training::evaluate(m, eval, norm, 16); });
    omp_set_num_threads(threads);
    const double ep = best_ms(reps, [&] { rb = training::evaluate(m, eval, norm, 16); });
    report("evaluate", es, ep, ra.sre().mean == rb.sre().mean && ra.nere().mean == rb.nere().mean);
    return 0;
}

#include "qgrad/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qgrad {

namespace {

// The FFTW planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

/// Contiguous line of length n. Unaligned so it can run on any std::vector buffer.
class LinePlan {
public:
    LinePlan(int n, Direction dir) {
        std::vector<Complex> scratch(static_cast<std::size_t>(n));
        const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan_) throw std::runtime_error("fft: FFTW could not create a plan");
    }
    ~LinePlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    LinePlan(const LinePlan&) = delete;
    LinePlan& operator=(const LinePlan&) = delete;

    void execute(Complex* line) const { fftw_execute_dft(plan_, as_fftw(line), as_fftw(line)); }

private:
    fftw_plan plan_ = nullptr;
};

}  // namespace

void dft(std::span<Complex> data, Direction dir) {
    if (data.empty()) return;
    LinePlan(static_cast<int>(data.size()), dir).execute(data.data());
}

void fourier_nd(std::vector<Complex>& data, int d, std::int64_t N, Direction dir, unsigned workers) {
    if (d < 1 || N < 1) throw std::invalid_argument("fourier_nd: need d >= 1 and N >= 1");
    const auto n = static_cast<std::size_t>(N);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    if (data.size() != total) throw std::invalid_argument("fourier_nd: data size is not N^d");

    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    const std::size_t lines = total / n;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(lines)));

    const LinePlan plan(static_cast<int>(n), dir);
    for (int axis = 0; axis < d; ++axis) {
        std::size_t stride = 1;
        for (int i = axis + 1; i < d; ++i) stride *= n;

        auto run_lines = [&](std::size_t begin, std::size_t end) {
            std::vector<Complex> line(n);
            for (std::size_t li = begin; li < end; ++li) {
                // Line li: outer block li / stride, inner offset li % stride.
                const std::size_t base = (li / stride) * stride * n + (li % stride);
                for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * stride];
                plan.execute(line.data());
                for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = line[j] * norm;
            }
        };

        if (workers == 1) {
            run_lines(0, lines);
            continue;
        }
        std::vector<std::jthread> pool;
        const std::size_t chunk = (lines + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(lines, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_lines, begin, end);
        }
    }
}

}  // namespace qgrad

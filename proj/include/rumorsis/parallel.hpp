#pragma once

// Index-parallel map with a serial twin. Exceptions thrown by the mapped
// function are captured per index; the one with the lowest index is rethrown
// after the loop, so parallel and serial runs fail identically.

#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#ifdef RUMORSIS_HAVE_OPENMP
#include <omp.h>
#endif

namespace rumorsis {

/// Caps the worker count used by parallel kernels; jobs <= 0 restores the default.
void set_jobs(int jobs);
int max_jobs();

template <class In, class F>
auto serial_map(std::span<const In> in, F&& f)
{
    using Out = std::invoke_result_t<F&, const In&>;
    std::vector<Out> out;
    out.reserve(in.size());
    for (const In& v : in)
        out.push_back(f(v));
    return out;
}

template <class In, class F>
auto parallel_map(std::span<const In> in, F&& f)
{
    using Out = std::invoke_result_t<F&, const In&>;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
    std::vector<std::optional<Out>> slots(in.size());
    std::vector<std::exception_ptr> errors(in.size());

#ifdef RUMORSIS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            slots[i].emplace(f(in[i]));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<Out> out;
    out.reserve(in.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace rumorsis

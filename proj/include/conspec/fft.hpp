#pragma once

// Thin RAII layer over FFTW3: aligned buffers and a process-wide plan cache.
//
// Plans are created once per (kind, shape) under a mutex with FFTW_ESTIMATE so
// the chosen algorithm, and therefore every result, is identical from run to
// run. Execution goes through the new-array interface, which FFTW documents as
// thread-safe, so callers may transform distinct buffers concurrently.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace conspec::fft {

using complex = std::complex<double>;

template <class T>
class Buffer {
 public:
  Buffer() = default;
  explicit Buffer(std::size_t n) : size_(n), data_(allocate(n)) {}

  T* data() { return data_.get(); }
  const T* data() const { return data_.get(); }
  std::size_t size() const { return size_; }
  T& operator[](std::size_t i) { return data_.get()[i]; }
  const T& operator[](std::size_t i) const { return data_.get()[i]; }
  std::span<T> span() { return {data(), size_}; }
  std::span<const T> span() const { return {data(), size_}; }

  void fill(const T& v) {
    for (std::size_t i = 0; i < size_; ++i) data_.get()[i] = v;
  }

 private:
  struct Free {
    void operator()(T* p) const { fftw_free(p); }
  };
  static std::unique_ptr<T, Free> allocate(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
    if (!p) throw std::bad_alloc();
    return std::unique_ptr<T, Free>(p);
  }

  std::size_t size_ = 0;
  std::unique_ptr<T, Free> data_;
};

enum class Kind { forward, backward, r2c, c2r };

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, std::vector<int> dims) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, dims);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int rank = static_cast<int>(dims.size());
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    const std::size_t half = total / static_cast<std::size_t>(dims.back()) *
                             static_cast<std::size_t>(dims.back() / 2 + 1);

    fftw_plan plan = nullptr;
    const unsigned flags = FFTW_ESTIMATE;
    switch (kind) {
      case Kind::forward:
      case Kind::backward: {
        Buffer<complex> in(total), out(total);
        plan = fftw_plan_dft(rank, dims.data(), reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()),
                             kind == Kind::forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        break;
      }
      case Kind::r2c: {
        Buffer<double> in(total);
        Buffer<complex> out(half);
        plan = fftw_plan_dft_r2c(rank, dims.data(), in.data(),
                                 reinterpret_cast<fftw_complex*>(out.data()), flags);
        break;
      }
      case Kind::c2r: {
        Buffer<complex> in(half);
        Buffer<double> out(total);
        plan = fftw_plan_dft_c2r(rank, dims.data(), reinterpret_cast<fftw_complex*>(in.data()),
                                 out.data(), flags);
        break;
      }
    }
    if (!plan) throw std::runtime_error("fft: FFTW failed to create a plan");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  PlanCache() = default;

  std::mutex mutex_;
  std::map<std::tuple<Kind, std::vector<int>>, fftw_plan> plans_;
};

/// Unnormalized complex transform, out-of-place. Both buffers must come from Buffer.
inline void execute(Kind kind, const std::vector<int>& dims, Buffer<complex>& in, Buffer<complex>& out) {
  fftw_plan plan = PlanCache::instance().get(kind, dims);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

inline void execute_r2c(const std::vector<int>& dims, Buffer<double>& in, Buffer<complex>& out) {
  fftw_plan plan = PlanCache::instance().get(Kind::r2c, dims);
  fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

/// Destroys `in`.
inline void execute_c2r(const std::vector<int>& dims, Buffer<complex>& in, Buffer<double>& out) {
  fftw_plan plan = PlanCache::instance().get(Kind::c2r, dims);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace conspec::fft

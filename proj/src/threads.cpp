#include "hjdisc/threads.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace hjdisc {

int worker_count() {
    static int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw <= 0) hw = 1;
        if (const char* env = std::getenv("HJDISC_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0 && v < 1024) return static_cast<int>(v) < hw ? static_cast<int>(v) : static_cast<int>(v);
        }
        return hw;
    }();
    return cached;
}

namespace {

// Persistent pool; spawning threads per step would dominate the run time.
class Pool {
public:
    explicit Pool(int workers) : stop_(false), job_id_(0), pending_(0) {
        for (int t = 0; t < workers; ++t) {
            threads_.emplace_back([this, t] { run(t); });
        }
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& th : threads_) th.join();
    }

    void dispatch(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
        int w = static_cast<int>(threads_.size());
        {
            std::lock_guard<std::mutex> lk(mu_);
            body_ = &body;
            n_ = n;
            pending_ = w;
            ++job_id_;
        }
        cv_.notify_all();
        std::unique_lock<std::mutex> lk(mu_);
        done_cv_.wait(lk, [this] { return pending_ == 0; });
    }

private:
    void run(int index) {
        std::size_t last_job = 0;
        for (;;) {
            const std::function<void(std::size_t, std::size_t)>* body = nullptr;
            std::size_t n = 0;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [&] { return stop_ || job_id_ != last_job; });
                if (stop_) return;
                last_job = job_id_;
                body = body_;
                n = n_;
            }
            int w = static_cast<int>(threads_.size());
            std::size_t chunk = (n + w - 1) / w;
            std::size_t lo = chunk * static_cast<std::size_t>(index);
            std::size_t hi = lo + chunk < n ? lo + chunk : n;
            if (lo < hi) (*body)(lo, hi);
            {
                std::lock_guard<std::mutex> lk(mu_);
                if (--pending_ == 0) done_cv_.notify_all();
            }
        }
    }

    std::mutex mu_;
    std::condition_variable cv_, done_cv_;
    std::vector<std::thread> threads_;
    bool stop_;
    std::size_t job_id_;
    int pending_;
    const std::function<void(std::size_t, std::size_t)>* body_ = nullptr;
    std::size_t n_ = 0;
};

} // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    int w = worker_count();
    if (w <= 1 || n < 2) {
        body(0, n);
        return;
    }
    static Pool pool(worker_count());
    pool.dispatch(n, body);
}

} // namespace hjdisc

#include "grasp/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace grasp {

namespace {

struct Job {
    std::function<void(std::size_t)> fn;
    std::size_t n = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> completed{0};
    std::mutex err_mutex;
    std::exception_ptr error;

    void run() {
        while (true) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mutex);
                if (!error) error = std::current_exception();
            }
            completed.fetch_add(1, std::memory_order_acq_rel);
        }
    }
};

class Pool {
public:
    static Pool& instance() {
        static Pool pool;
        return pool;
    }

    void set_workers(int n) {
        n = std::max(1, std::min(n, 64));
        std::lock_guard region(region_mutex_);
        stop_workers();
        target_ = n;
        start_workers();
    }

    int workers() const { return target_; }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
        if (n == 0) return;
        thread_local bool inside = false;
        if (inside || target_ <= 1 || n == 1) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        std::lock_guard region(region_mutex_);
        auto job = std::make_shared<Job>();
        job->fn = fn;
        job->n = n;
        {
            std::lock_guard lk(mutex_);
            current_ = job;
            ++generation_;
        }
        cv_.notify_all();
        inside = true;
        job->run();
        inside = false;
        while (job->completed.load(std::memory_order_acquire) < n)
            std::this_thread::yield();
        {
            std::lock_guard lk(mutex_);
            current_.reset();
        }
        if (job->error) std::rethrow_exception(job->error);
    }

private:
    Pool() {
        const unsigned hc = std::thread::hardware_concurrency();
        target_ = static_cast<int>(std::max(1u, std::min(hc, 16u)));
        start_workers();
    }
    ~Pool() { stop_workers(); }

    void start_workers() {
        stop_ = false;
        for (int i = 1; i < target_; ++i)
            threads_.emplace_back([this] { worker(); });
    }

    void stop_workers() {
        {
            std::lock_guard lk(mutex_);
            stop_ = true;
            ++generation_;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
        threads_.clear();
    }

    void worker() {
        std::uint64_t seen = 0; // first wait may pass spuriously; run() on a
                                // drained or null job is a no-op
        while (true) {
            std::shared_ptr<Job> job;
            {
                std::unique_lock lk(mutex_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                job = current_;
            }
            if (job) job->run();
        }
    }

    std::mutex region_mutex_; // one parallel region at a time
    std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<std::thread> threads_;
    std::shared_ptr<Job> current_;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    int target_ = 1;
};

} // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    Pool::instance().parallel_for(n, fn);
}

void set_thread_count(int n) { Pool::instance().set_workers(n); }

int thread_count() { return Pool::instance().workers(); }

} // namespace grasp

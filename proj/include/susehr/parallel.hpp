#pragma once

#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace susehr {

// Maps a pulled sequence onto `threads` workers in bounded chunks and
// consumes the results in input order, so the output sequence is identical
// for every worker count. Memory is bounded by one chunk (256 items per
// worker). `map_fn` must be safe to call concurrently on distinct items.
template <typename In, typename Out, typename Produce, typename MapFn, typename Consume>
void ordered_parallel_map(unsigned threads, Produce produce, MapFn map_fn, Consume consume) {
    if (threads <= 1) {
        while (std::optional<In> item = produce())
            consume(map_fn(std::move(*item)));
        return;
    }

    const size_t chunk_size = static_cast<size_t>(threads) * 256;
    std::vector<In> inputs;
    inputs.reserve(chunk_size);

    while (true) {
        inputs.clear();
        while (inputs.size() < chunk_size) {
            std::optional<In> item = produce();
            if (!item)
                break;
            inputs.push_back(std::move(*item));
        }
        if (inputs.empty())
            break;

        std::vector<Out> outputs(inputs.size());
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w]() {
                try {
                    for (size_t i = w; i < inputs.size(); i += threads)
                        outputs[i] = map_fn(std::move(inputs[i]));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& worker : workers)
            worker.join();
        for (const auto& error : errors)
            if (error)
                std::rethrow_exception(error);

        for (auto& out : outputs)
            consume(std::move(out));

        if (inputs.size() < chunk_size)
            break; // the producer is exhausted
    }
}

} // namespace susehr

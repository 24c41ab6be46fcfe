// Compares the serial and OpenMP per-document paths of the text pipeline on
// a synthetic corpus and checks that both produce identical output.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "atkc/text.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

std::vector<std::pair<std::string, std::string>> synthetic_corpus(int count) {
    static const char* subjects[] = {"router firmware", "camera web interface", "smart plug service",
                                     "media player api", "hub controller", "printer daemon"};
    static const char* flaws[] = {"buffer overflow attack", "command injection flaw",
                                  "authentication bypass", "directory traversal attack",
                                  "weak default password", "cross site scripting attack"};
    static const char* outcomes[] = {"remote code execution", "unauthorized access",
                                     "information disclosure", "denial of service",
                                     "root privileges", "configuration file exposure"};
    std::mt19937 rng(12345);
    std::vector<std::pair<std::string, std::string>> corpus;
    for (int i = 0; i < count; ++i) {
        std::string id = "CVE-2020-" + std::to_string(10000 + i);
        std::string text = std::string("The ") + subjects[rng() % 6] + " in device model " +
                           std::to_string(rng() % 90 + 10) + " allows a " + flaws[rng() % 6] +
                           " which leads to " + outcomes[rng() % 6] + " via the local network.";
        corpus.emplace_back(id, text);
    }
    return corpus;
}

double time_run(const std::vector<std::pair<std::string, std::string>>& corpus, bool parallel,
                std::map<std::string, std::vector<atkc::text::IoPair>>& out) {
    auto start = std::chrono::steady_clock::now();
    out = atkc::text::run_pipeline(corpus, {}, parallel);
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    int count = argc > 1 ? std::atoi(argv[1]) : 2000;
    auto corpus = synthetic_corpus(count);

#ifdef _OPENMP
    std::printf("corpus: %d documents, %d OpenMP threads\n", count, omp_get_max_threads());
#else
    std::printf("corpus: %d documents, OpenMP unavailable\n", count);
#endif

    std::map<std::string, std::vector<atkc::text::IoPair>> serial_out, parallel_out;
    double t_serial = time_run(corpus, false, serial_out);
    double t_parallel = time_run(corpus, true, parallel_out);

    std::printf("serial reference: %.3f s\n", t_serial);
    std::printf("openmp:           %.3f s\n", t_parallel);
    std::printf("speedup:          %.2fx\n", t_serial / t_parallel);
    if (serial_out != parallel_out) {
        std::printf("MISMATCH: parallel output differs from serial reference\n");
        return 1;
    }
    std::printf("outputs identical\n");
    return 0;
}

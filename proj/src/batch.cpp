#include "qualex/batch.hpp"

#include "qualex/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qualex {

namespace {

FileOutcome analyze_one(const SourceFile& file, const LanguageProfile& profile) {
    FileOutcome out;
    out.path = file.path;
    try {
        out.analysis = profile.analyze(file.text);
    } catch (const ParseFailure& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace

std::vector<FileOutcome> analyze_batch_serial(const std::vector<SourceFile>& files, const LanguageProfile& profile) {
    std::vector<FileOutcome> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(analyze_one(f, profile));
    return out;
}

std::vector<FileOutcome> analyze_batch_parallel(const std::vector<SourceFile>& files,
                                                const LanguageProfile& profile) {
    std::vector<FileOutcome> out(files.size());
    const auto n = static_cast<long long>(files.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = analyze_one(files[static_cast<std::size_t>(i)], profile);
    return out;
}

void set_analysis_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int analysis_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace qualex

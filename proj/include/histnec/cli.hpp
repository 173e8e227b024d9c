#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "histnec/model.hpp"

namespace histnec {

struct ReportEntry {
    std::string claim;
    std::string computed;
    std::string expected;
    bool agree = false;
};

struct Report {
    std::string title;
    std::vector<ReportEntry> entries;
    std::vector<std::string> notes;

    bool all_agree() const;
    std::string text() const;
    Json json() const;
};

/// Corpus location baked in at build time, overridable by HISTNEC_CORPUS.
std::string default_corpus_dir();

/// name is one of figures, tiger, lavenham; throws std::invalid_argument otherwise.
Report demo(const std::string& name, const std::string& corpus_dir);

/// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage, 3 semantic error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace histnec

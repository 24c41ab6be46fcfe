#include "atkc/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atkc::text {

namespace {

const std::unordered_set<std::string>& stop_words() {
    // Determiners, prepositions, pronouns, conjunctions, auxiliaries and
    // generic verbs. These break candidate phrases.
    static const std::unordered_set<std::string> words = {
        // determiners
        "the", "a", "an", "this", "that", "these", "those", "some", "any", "each",
        "every", "no", "all", "both", "such", "other", "another", "certain",
        // prepositions
        "in", "on", "at", "by", "for", "with", "from", "to", "of", "via", "over",
        "under", "through", "into", "onto", "within", "without", "during",
        "before", "after", "between", "against", "about", "upon", "up", "out",
        // pronouns
        "it", "its", "he", "she", "they", "them", "their", "his", "her", "we",
        "us", "our", "you", "your", "i", "me", "my", "itself", "which", "who",
        "whom", "whose", "what", "there",
        // conjunctions
        "and", "or", "but", "nor", "so", "yet", "if", "then", "than", "because",
        "while", "when", "where", "as",
        // auxiliaries
        "is", "are", "was", "were", "be", "been", "being", "am", "do", "does",
        "did", "have", "has", "had", "can", "could", "may", "might", "must",
        "shall", "should", "will", "would", "not", "also",
        // generic verbs
        "allow", "allows", "allowed", "allowing", "enable", "enables", "enabled",
        "enabling", "cause", "causes", "caused", "causing", "permit", "permits",
        "permitted", "let", "lets", "make", "makes", "made", "use", "uses",
        "used", "using", "contain", "contains", "contained", "include",
        "includes", "included", "exist", "exists", "occur", "occurs", "affect",
        "affects", "affected", "lead", "leads",
    };
    return words;
}

const std::unordered_set<std::string>& action_words() {
    // Attack actions. They head input phrases, so they classify as non-noun,
    // but unlike the stop words they stay inside candidate phrases.
    static const std::unordered_set<std::string> words = {
        "attack", "attacks", "exploit", "exploits", "bypass", "bypasses",
        "spoof", "spoofs", "inject", "injects", "overflow", "overflows",
        "hijack", "hijacks", "crash", "crashes", "flood", "floods",
        "intercept", "intercepts", "tamper", "tampers", "escalate", "escalates",
    };
    return words;
}

bool ends_with(const std::string& w, const std::string& suffix) {
    return w.size() > suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ' ';
        s += tokens[i];
    }
    return s;
}

} // namespace

std::set<std::string> stemmed_token_set(const std::string& phrase) {
    std::set<std::string> stems;
    std::string token;
    auto flush = [&]() {
        if (!token.empty()) stems.insert(porter_stem(token));
        token.clear();
    };
    for (char raw : phrase) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalnum(c))
            token += static_cast<char>(std::tolower(c));
        else
            flush();
    }
    flush();
    return stems;
}

bool is_stop_word(const std::string& surface) {
    return stop_words().count(surface) > 0;
}

PosClass classify_pos(const std::string& surface) {
    if (stop_words().count(surface) || action_words().count(surface)) return PosClass::NonNoun;
    for (const char* s : {"tion", "ment", "ness", "ity", "er", "or", "ism", "ware", "file", "api"})
        if (ends_with(surface, s)) return PosClass::Noun;
    for (const char* s : {"ing", "ed", "ly", "ize"})
        if (ends_with(surface, s)) return PosClass::NonNoun;
    return PosClass::Noun;
}

PrimedCorpus prime(const std::vector<std::pair<std::string, std::string>>& raw_descriptions) {
    PrimedCorpus corpus;
    for (const auto& [cve_id, raw_text] : raw_descriptions) {
        PrimedDocument doc;
        doc.cve_id = cve_id;
        std::string token;
        auto flush = [&]() {
            if (token.empty()) return;
            std::string stem = porter_stem(token);
            corpus.stem_map[stem].insert(token);
            doc.surfaces.push_back(token);
            doc.stems.push_back(std::move(stem));
            token.clear();
        };
        for (char raw : raw_text) {
            unsigned char c = static_cast<unsigned char>(raw);
            if (std::isalnum(c))
                token += static_cast<char>(std::tolower(c));
            else
                flush();
        }
        flush();
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

std::map<std::string, std::vector<std::string>> tfidf_rank(const PrimedCorpus& corpus) {
    const double n_docs = static_cast<double>(corpus.documents.size());
    std::map<std::string, int> df;
    for (const auto& doc : corpus.documents) {
        std::set<std::string> distinct(doc.stems.begin(), doc.stems.end());
        for (const auto& s : distinct) df[s]++;
    }

    std::map<std::string, std::vector<std::string>> result;
    for (const auto& doc : corpus.documents) {
        std::map<std::string, int> tf;
        std::map<std::string, std::size_t> first_pos;
        for (std::size_t i = 0; i < doc.stems.size(); ++i) {
            tf[doc.stems[i]]++;
            first_pos.emplace(doc.stems[i], i);
        }
        std::vector<std::string> order;
        order.reserve(tf.size());
        for (const auto& [stem, count] : tf) order.push_back(stem);
        std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
            double sa = tf[a] * std::log(n_docs / df[a]);
            double sb = tf[b] * std::log(n_docs / df[b]);
            if (sa != sb) return sa > sb;
            return first_pos[a] < first_pos[b];
        });
        result[doc.cve_id] = std::move(order);
    }
    return result;
}

std::map<std::string, double> textrank_token_scores(const PrimedDocument& doc) {
    constexpr double kDamping = 0.85;
    constexpr double kTolerance = 1e-6;
    constexpr int kMaxIterations = 100;
    constexpr int kWindow = 2;

    // Candidate token sequence: stop words removed.
    std::vector<std::string> candidates;
    for (std::size_t i = 0; i < doc.stems.size(); ++i)
        if (!is_stop_word(doc.surfaces[i])) candidates.push_back(doc.stems[i]);

    std::vector<std::string> vertices; // first-occurrence order
    std::map<std::string, std::size_t> index;
    for (const auto& s : candidates)
        if (index.emplace(s, vertices.size()).second) vertices.push_back(s);
    const std::size_t n = vertices.size();
    if (n == 0) return {};

    std::vector<std::set<std::size_t>> adjacency(n);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size() && j < i + kWindow; ++j) {
            std::size_t u = index[candidates[i]];
            std::size_t v = index[candidates[j]];
            if (u == v) continue;
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
    }

    std::vector<double> score(n, 1.0 / n);
    std::vector<double> next(n);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (adjacency[i].empty()) dangling += score[i];
        double max_delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double in = 0.0;
            for (std::size_t j : adjacency[i]) in += score[j] / adjacency[j].size();
            next[i] = (1.0 - kDamping) / n + kDamping * (in + dangling / n);
            max_delta = std::max(max_delta, std::abs(next[i] - score[i]));
        }
        score.swap(next);
        if (max_delta < kTolerance) break;
    }

    std::map<std::string, double> result;
    for (std::size_t i = 0; i < n; ++i) result[vertices[i]] = score[i];
    return result;
}

namespace {

std::vector<RankedPhrase> phrases_for_document(const PrimedDocument& doc) {
    auto scores = textrank_token_scores(doc);

    std::vector<RankedPhrase> phrases;
    std::size_t i = 0;
    while (i < doc.stems.size()) {
        if (is_stop_word(doc.surfaces[i])) {
            ++i;
            continue;
        }
        RankedPhrase p;
        while (i < doc.stems.size() && !is_stop_word(doc.surfaces[i])) {
            p.stems.push_back(doc.stems[i]);
            p.positions.push_back(i);
            p.score += scores[doc.stems[i]];
            ++i;
        }
        p.pos_class = classify_pos(doc.surfaces[p.positions.back()]);
        phrases.push_back(std::move(p));
    }
    std::stable_sort(phrases.begin(), phrases.end(), [](const RankedPhrase& a, const RankedPhrase& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.positions.front() < b.positions.front();
    });
    return phrases;
}

} // namespace

std::map<std::string, std::vector<RankedPhrase>> textrank_phrases(const PrimedCorpus& corpus,
                                                                  bool parallel) {
    std::vector<std::vector<RankedPhrase>> per_doc(corpus.documents.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long d = 0; d < static_cast<long long>(corpus.documents.size()); ++d)
            per_doc[d] = phrases_for_document(corpus.documents[d]);
    } else {
        for (std::size_t d = 0; d < corpus.documents.size(); ++d)
            per_doc[d] = phrases_for_document(corpus.documents[d]);
    }
    std::map<std::string, std::vector<RankedPhrase>> result;
    for (std::size_t d = 0; d < corpus.documents.size(); ++d)
        result[corpus.documents[d].cve_id] = std::move(per_doc[d]);
    return result;
}

std::string IoPair::serialized() const {
    return input + "->" + (self_target ? "this:" : "") + output;
}

std::map<std::string, std::vector<IoPair>> extract_io(
    const PrimedCorpus& corpus,
    const std::map<std::string, std::vector<std::string>>& tfidf,
    const std::map<std::string, std::vector<RankedPhrase>>& phrases,
    const ExtractOptions& opts) {
    std::map<std::string, std::vector<IoPair>> result;
    for (const auto& doc : corpus.documents) {
        auto& pairs = result[doc.cve_id];
        if (doc.empty()) continue;

        std::map<std::string, std::size_t> rank;
        auto it = tfidf.find(doc.cve_id);
        if (it != tfidf.end())
            for (std::size_t i = 0; i < it->second.size(); ++i) rank[it->second[i]] = i;

        // Prune a phrase to its 3 best tf-idf tokens, original order kept,
        // and render it with the surface forms.
        auto prune = [&](const RankedPhrase& p) {
            std::vector<std::size_t> kept = p.positions;
            if (kept.size() > 3) {
                std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
                    return rank[doc.stems[a]] < rank[doc.stems[b]];
                });
                kept.resize(3);
                std::sort(kept.begin(), kept.end());
            }
            std::vector<std::string> surfaces;
            std::vector<std::string> stems;
            for (std::size_t pos : kept) {
                surfaces.push_back(doc.surfaces[pos]);
                stems.push_back(doc.stems[pos]);
            }
            return std::make_pair(join(surfaces), stems);
        };

        std::vector<std::string> inputs;
        std::vector<std::pair<std::string, std::vector<std::string>>> outputs;
        auto pit = phrases.find(doc.cve_id);
        if (pit != phrases.end()) {
            for (const auto& p : pit->second) {
                if (p.pos_class == PosClass::NonNoun && inputs.size() < opts.max_inputs) {
                    auto [text, stems] = prune(p);
                    if (std::find(inputs.begin(), inputs.end(), text) == inputs.end())
                        inputs.push_back(text);
                } else if (p.pos_class == PosClass::Noun && outputs.size() < opts.max_outputs) {
                    auto [text, stems] = prune(p);
                    bool dup = std::any_of(outputs.begin(), outputs.end(),
                                           [&](const auto& o) { return o.first == text; });
                    if (!dup) outputs.emplace_back(text, stems);
                }
            }
        }
        if (outputs.empty()) continue; // no attack postcondition derivable; CVE stays flagged

        // Every remote CVE presupposes network reachability, so a CVE whose
        // description yields no action phrase still gets a generic entry point.
        if (inputs.empty()) inputs.push_back("network access");

        for (const auto& in : inputs) {
            for (const auto& [out, stems] : outputs) {
                bool self = std::none_of(stems.begin(), stems.end(), [&](const std::string& s) {
                    return opts.other_device_stems.count(s) > 0;
                });
                pairs.push_back({doc.cve_id, in, out, self});
            }
        }
    }
    return result;
}

std::map<std::string, std::vector<IoPair>> run_pipeline(
    const std::vector<std::pair<std::string, std::string>>& raw_descriptions,
    const ExtractOptions& opts,
    bool parallel) {
    PrimedCorpus corpus = prime(raw_descriptions);
    auto tfidf = tfidf_rank(corpus);
    auto phrases = textrank_phrases(corpus, parallel);
    return extract_io(corpus, tfidf, phrases, opts);
}

} // namespace atkc::text

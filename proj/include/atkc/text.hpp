#ifndef ATKC_TEXT_HPP
#define ATKC_TEXT_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace atkc::text {

// Porter stemmer (1980 rule set). Expects a lowercase token.
std::string porter_stem(const std::string& word);

// Lowercases, strips non-alphanumerics and stems every token of a phrase.
std::set<std::string> stemmed_token_set(const std::string& phrase);

enum class PosClass { Noun, NonNoun };

// Deterministic part-of-speech classification: closed-class lexicon first,
// then suffix rules, default Noun.
PosClass classify_pos(const std::string& surface);

// Closed-class function words and generic verbs. These never participate in
// candidate phrases.
bool is_stop_word(const std::string& surface);

struct PrimedDocument {
    std::string cve_id;
    std::vector<std::string> stems;    // lowercase, Porter-stemmed
    std::vector<std::string> surfaces; // lowercase, pre-stemming, parallel to stems

    bool empty() const { return stems.empty(); }
};

struct PrimedCorpus {
    std::vector<PrimedDocument> documents;
    std::map<std::string, std::set<std::string>> stem_map; // stem -> surface forms
};

// lowercase -> strip non-alphanumeric -> whitespace tokenize -> Porter stem.
PrimedCorpus prime(const std::vector<std::pair<std::string, std::string>>& raw_descriptions);

// Per document, tokens ordered by descending tf*idf; tf = raw count,
// idf = ln(N/df). Ties break by first occurrence in the document.
std::map<std::string, std::vector<std::string>> tfidf_rank(const PrimedCorpus& corpus);

struct RankedPhrase {
    std::vector<std::string> stems;
    std::vector<std::size_t> positions; // token positions in the source document
    double score = 0.0;
    PosClass pos_class = PosClass::Noun; // class of the head (final) token
};

// TextRank token scores for one document: PageRank over the undirected
// co-occurrence graph of candidate tokens, damping 0.85, window 2.
// Scores sum to 1 over the graph's vertices.
std::map<std::string, double> textrank_token_scores(const PrimedDocument& doc);

std::map<std::string, std::vector<RankedPhrase>> textrank_phrases(const PrimedCorpus& corpus,
                                                                  bool parallel = false);

struct IoPair {
    std::string cve_id;
    std::string input;
    std::string output;
    bool self_target = true;

    // "<input>-><output>", with "this:" on the output when self-targeted.
    std::string serialized() const;

    bool operator==(const IoPair&) const = default;
};

struct ExtractOptions {
    std::size_t max_inputs = 2;
    std::size_t max_outputs = 4;
    // Lowercase stems naming other catalog devices; an output phrase touching
    // one of these is not self-targeted.
    std::set<std::string> other_device_stems;
};

std::map<std::string, std::vector<IoPair>> extract_io(
    const PrimedCorpus& corpus,
    const std::map<std::string, std::vector<std::string>>& tfidf,
    const std::map<std::string, std::vector<RankedPhrase>>& phrases,
    const ExtractOptions& opts = {});

// prime + tfidf + textrank + extract in one call. The parallel flag selects
// the OpenMP per-document path; output is identical to the serial path.
std::map<std::string, std::vector<IoPair>> run_pipeline(
    const std::vector<std::pair<std::string, std::string>>& raw_descriptions,
    const ExtractOptions& opts = {},
    bool parallel = false);

} // namespace atkc::text

#endif

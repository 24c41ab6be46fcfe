#include "atkc/text.hpp"

#include <algorithm>

// Porter stemming algorithm (original 1980 rule set).

namespace atkc::text {

namespace {

bool is_consonant(const std::string& w, int i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
    return true;
}

// Measure m of w[0..j]: number of VC sequences.
int measure(const std::string& w, int j) {
    int n = 0;
    int i = 0;
    while (true) {
        if (i > j) return n;
        if (!is_consonant(w, i)) break;
        ++i;
    }
    ++i;
    while (true) {
        while (true) {
            if (i > j) return n;
            if (is_consonant(w, i)) break;
            ++i;
        }
        ++i;
        ++n;
        while (true) {
            if (i > j) return n;
            if (!is_consonant(w, i)) break;
            ++i;
        }
        ++i;
    }
}

bool has_vowel(const std::string& w, int j) {
    for (int i = 0; i <= j; ++i)
        if (!is_consonant(w, i)) return true;
    return false;
}

bool double_consonant(const std::string& w, int j) {
    if (j < 1) return false;
    if (w[j] != w[j - 1]) return false;
    return is_consonant(w, j);
}

// cvc at positions j-2..j, where the final c is not w, x or y.
bool cvc(const std::string& w, int j) {
    if (j < 2 || !is_consonant(w, j) || is_consonant(w, j - 1) || !is_consonant(w, j - 2)) return false;
    char c = w[j];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const std::string& suffix) {
    return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Stem length index (last char of stem) after removing suffix.
int stem_end(const std::string& w, const std::string& suffix) {
    return static_cast<int>(w.size() - suffix.size()) - 1;
}

void step1ab(std::string& w) {
    if (ends_with(w, "sses")) {
        w = w.substr(0, w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w = w.substr(0, w.size() - 2);
    } else if (ends_with(w, "ss")) {
        // unchanged
    } else if (ends_with(w, "s") && w.size() > 1) {
        w = w.substr(0, w.size() - 1);
    }

    bool cleanup = false;
    if (ends_with(w, "eed")) {
        if (measure(w, stem_end(w, "eed")) > 0) w = w.substr(0, w.size() - 1);
    } else if (ends_with(w, "ed") && has_vowel(w, stem_end(w, "ed"))) {
        w = w.substr(0, w.size() - 2);
        cleanup = true;
    } else if (ends_with(w, "ing") && has_vowel(w, stem_end(w, "ing"))) {
        w = w.substr(0, w.size() - 3);
        cleanup = true;
    }
    if (cleanup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w += "e";
        } else if (double_consonant(w, static_cast<int>(w.size()) - 1)) {
            char c = w.back();
            if (c != 'l' && c != 's' && c != 'z') w = w.substr(0, w.size() - 1);
        } else if (measure(w, static_cast<int>(w.size()) - 1) == 1 && cvc(w, static_cast<int>(w.size()) - 1)) {
            w += "e";
        }
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(w, static_cast<int>(w.size()) - 2))
        w[w.size() - 1] = 'i';
}

struct Rule {
    const char* suffix;
    const char* repl;
};

void apply_rules(std::string& w, const Rule* rules, int count, int min_m) {
    for (int i = 0; i < count; ++i) {
        if (ends_with(w, rules[i].suffix)) {
            int j = stem_end(w, rules[i].suffix);
            if (j >= 0 && measure(w, j) >= min_m)
                w = w.substr(0, j + 1) + rules[i].repl;
            return;
        }
    }
}

void step2(std::string& w) {
    static const Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    apply_rules(w, rules, sizeof(rules) / sizeof(rules[0]), 1);
}

void step3(std::string& w) {
    static const Rule rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_rules(w, rules, sizeof(rules) / sizeof(rules[0]), 1);
}

void step4(std::string& w) {
    static const Rule rules[] = {
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
        {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
        {"ent", ""},  {"ou", ""},   {"ism", ""},  {"ate", ""}, {"iti", ""},
        {"ous", ""},  {"ive", ""},  {"ize", ""},
    };
    for (const auto& r : rules) {
        if (ends_with(w, r.suffix)) {
            int j = stem_end(w, r.suffix);
            if (j >= 0 && measure(w, j) >= 2) w = w.substr(0, j + 1);
            return;
        }
    }
    // (m>1 and (*S or *T)) ION ->
    if (ends_with(w, "ion")) {
        int j = stem_end(w, "ion");
        if (j >= 0 && measure(w, j) >= 2 && (w[j] == 's' || w[j] == 't')) w = w.substr(0, j + 1);
    }
}

void step5(std::string& w) {
    if (ends_with(w, "e")) {
        int j = static_cast<int>(w.size()) - 2;
        int m = measure(w, j);
        if (m > 1 || (m == 1 && !cvc(w, j))) w = w.substr(0, w.size() - 1);
    }
    int last = static_cast<int>(w.size()) - 1;
    if (double_consonant(w, last) && w[last] == 'l' && measure(w, last) > 1)
        w = w.substr(0, w.size() - 1);
}

} // namespace

std::string porter_stem(const std::string& word) {
    if (word.size() <= 2) return word;
    if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
        return word; // tokens with digits pass through unchanged
    if (word.find_first_of("aeiouy") == std::string::npos)
        return word; // vowel-less tokens are acronyms (dns, tv), not inflected words
    std::string w = word;
    step1ab(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    return w;
}

} // namespace atkc::text

#include "nonosc/network.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nonosc {

int Network::species_index(const std::string& name) const {
    for (size_t i = 0; i < species.size(); ++i)
        if (species[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

struct Token {
    std::string text;
    int col;  // 1-based byte offset in the line
};

bool is_name(const std::string& t) {
    if (t.empty() || !std::isalpha(static_cast<unsigned char>(t[0]))) return false;
    for (const char c : t)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool is_integer(const std::string& t) {
    if (t.empty()) return false;
    for (const char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

// During parsing reactions are held with species names; indices are resolved
// once the species order is final.
struct RawReaction {
    std::string label;
    std::vector<std::pair<int, std::string>> reactants;  // coeff, name
    std::vector<std::pair<int, std::string>> products;
    int line;
    int col;
};

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Network run() {
        std::istringstream in(text_);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto toks = tokenize(line);
            if (toks.empty()) continue;
            if (toks[0].text == "species") {
                parse_species_line(toks, lineno);
            } else {
                parse_reaction_line(toks, lineno);
            }
        }
        return finish();
    }

private:
    void parse_species_line(const std::vector<Token>& toks, int lineno) {
        if (declared_) throw ParseError(lineno, toks[0].col, "duplicate species line");
        if (!raw_.empty())
            throw ParseError(lineno, toks[0].col, "species line must precede reactions");
        if (toks.size() < 2)
            throw ParseError(lineno, toks[0].col, "species line declares no species");
        for (size_t k = 1; k < toks.size(); ++k) {
            if (!is_name(toks[k].text))
                throw ParseError(lineno, toks[k].col,
                                 "invalid species name '" + toks[k].text + "'");
            for (const auto& s : species_)
                if (s == toks[k].text)
                    throw DuplicateSpeciesError(lineno, toks[k].col,
                                                "duplicate species '" + toks[k].text + "'");
            species_.push_back(toks[k].text);
        }
        declared_ = true;
    }

    void parse_reaction_line(std::vector<Token> toks, int lineno) {
        std::string label;
        if (!toks.empty() && toks[0].text.size() > 1 && toks[0].text.back() == ':') {
            label = toks[0].text.substr(0, toks[0].text.size() - 1);
            if (!is_name(label))
                throw ParseError(lineno, toks[0].col,
                                 "invalid reaction label '" + label + "'");
            toks.erase(toks.begin());
        }
        if (toks.empty())
            throw ParseError(lineno, 1, "reaction line has no reaction");

        size_t arrow = toks.size();
        bool reversible = false;
        for (size_t k = 0; k < toks.size(); ++k) {
            if (toks[k].text == "->" || toks[k].text == "<->") {
                arrow = k;
                reversible = (toks[k].text == "<->");
                break;
            }
        }
        if (arrow == toks.size())
            throw ParseError(lineno, toks[0].col, "missing '->' or '<->'");

        RawReaction r;
        r.label = label;
        r.line = lineno;
        r.col = toks[0].col;
        r.reactants = parse_complex(toks, 0, arrow, lineno);
        r.products = parse_complex(toks, arrow + 1, toks.size(), lineno);
        if (normalized(r.reactants) == normalized(r.products))
            throw ParseError(lineno, toks[0].col,
                             "reactant and product complexes are identical");
        raw_.push_back(r);
        if (reversible) {
            RawReaction back;
            back.label = label.empty() ? "" : label + "_rev";
            back.reactants = r.products;
            back.products = r.reactants;
            back.line = lineno;
            back.col = toks[0].col;
            raw_.push_back(back);
        }
    }

    // Parses toks[first, last) as a complex: "0" or term (+ term)*.
    std::vector<std::pair<int, std::string>> parse_complex(const std::vector<Token>& toks,
                                                           size_t first, size_t last,
                                                           int lineno) {
        if (first >= last)
            throw ParseError(lineno, first > 0 && first - 1 < toks.size()
                                         ? toks[first - 1].col
                                         : 1,
                             "empty complex (write '0' for the zero complex)");
        if (last - first == 1 && toks[first].text == "0") return {};

        std::vector<std::pair<int, std::string>> terms;
        size_t k = first;
        while (k < last) {
            int coeff = 1;
            if (is_integer(toks[k].text)) {
                coeff = std::stoi(toks[k].text);
                if (coeff <= 0)
                    throw ParseError(lineno, toks[k].col,
                                     "stoichiometric coefficient must be positive");
                ++k;
                if (k >= last)
                    throw ParseError(lineno, toks[k - 1].col,
                                     "coefficient without species name");
            }
            if (!is_name(toks[k].text))
                throw ParseError(lineno, toks[k].col,
                                 "expected species name, got '" + toks[k].text + "'");
            terms.emplace_back(coeff, toks[k].text);
            ++k;
            if (k < last) {
                if (toks[k].text != "+")
                    throw ParseError(lineno, toks[k].col,
                                     "expected '+', got '" + toks[k].text + "'");
                ++k;
                if (k >= last)
                    throw ParseError(lineno, toks[k - 1].col, "dangling '+'");
            }
        }
        return terms;
    }

    static std::map<std::string, int> normalized(
        const std::vector<std::pair<int, std::string>>& terms) {
        std::map<std::string, int> m;
        for (const auto& [c, name] : terms) m[name] += c;
        return m;
    }

    Network finish() {
        // Without an explicit species line, declaration order is first
        // appearance: reactions in order, reactants before products.
        if (!declared_) {
            for (const auto& r : raw_) {
                for (const auto& [c, name] : r.reactants) note_species(name);
                for (const auto& [c, name] : r.products) note_species(name);
            }
        }
        Network net;
        net.species = species_;
        for (size_t idx = 0; idx < raw_.size(); ++idx) {
            const auto& r = raw_[idx];
            Reaction rx;
            rx.label = r.label.empty() ? "R" + std::to_string(idx + 1) : r.label;
            rx.reactants = resolve(r.reactants, r.line);
            rx.products = resolve(r.products, r.line);
            net.reactions.push_back(rx);
        }
        return net;
    }

    void note_species(const std::string& name) {
        for (const auto& s : species_)
            if (s == name) return;
        species_.push_back(name);
    }

    Complex resolve(const std::vector<std::pair<int, std::string>>& terms, int line) {
        Complex c;
        for (const auto& [coeff, name] : terms) {
            int idx = -1;
            for (size_t i = 0; i < species_.size(); ++i)
                if (species_[i] == name) { idx = static_cast<int>(i); break; }
            if (idx < 0)
                throw UnknownSpeciesError(line, 1, "unknown species '" + name + "'");
            c[idx] += coeff;
        }
        return c;
    }

    const std::string& text_;
    bool declared_ = false;
    std::vector<std::string> species_;
    std::vector<RawReaction> raw_;
};

}  // namespace

Network parse_network(const std::string& text) { return Parser(text).run(); }

Network parse_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

namespace {

std::string complex_to_string(const Network& n, const Complex& c) {
    if (c.empty()) return "0";
    std::string out;
    for (const auto& [i, coeff] : c) {
        if (!out.empty()) out += " + ";
        if (coeff != 1) out += std::to_string(coeff) + " ";
        out += n.species[static_cast<size_t>(i)];
    }
    return out;
}

}  // namespace

std::string serialize_network(const Network& n) {
    std::string out = "species";
    for (const auto& s : n.species) out += " " + s;
    out += "\n";
    for (const auto& r : n.reactions) {
        out += r.label + ": " + complex_to_string(n, r.reactants) + " -> " +
               complex_to_string(n, r.products) + "\n";
    }
    return out;
}

std::string network_digest(const Network& n) {
    const std::string s = serialize_network(n);
    uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RatMatrix stoichiometry_matrix(const Network& n) {
    RatMatrix g = rat_zeros(n.n_species(), n.n_reactions());
    for (int j = 0; j < n.n_reactions(); ++j) {
        for (const auto& [i, c] : n.reactions[static_cast<size_t>(j)].reactants)
            g(i, j) -= c;
        for (const auto& [i, c] : n.reactions[static_cast<size_t>(j)].products)
            g(i, j) += c;
    }
    return g;
}

std::vector<std::pair<int, int>> reactant_pairs(const Network& n) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n.n_reactions(); ++j)
        for (const auto& [i, c] : n.reactions[static_cast<size_t>(j)].reactants)
            if (c > 0) pairs.emplace_back(j, i);
    return pairs;
}

}  // namespace nonosc

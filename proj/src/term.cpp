#include "term.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

namespace cohoch {

namespace {

struct Pool {
    std::deque<Term> store;  // stable addresses
    std::map<std::pair<std::string, int>, TermRef> atoms;
    std::map<std::pair<TermRef, TermRef>, TermRef> pairs;
    std::map<std::vector<TermRef>, TermRef> words;
    std::map<std::pair<TermRef, int>, TermRef> shifts;

    Term* fresh() {
        store.emplace_back();
        Term* t = &store.back();
        t->id = static_cast<unsigned>(store.size() - 1);
        return t;
    }
};

Pool& pool() {
    static Pool p;
    return p;
}

}  // namespace

TermRef atom(const std::string& name, int degree) {
    Pool& p = pool();
    auto key = std::make_pair(name, degree);
    auto it = p.atoms.find(key);
    if (it != p.atoms.end()) return it->second;
    Term* t = p.fresh();
    t->kind = TermKind::atom;
    t->degree = degree;
    t->name = name;
    p.atoms.emplace(key, t);
    return t;
}

TermRef pair_term(TermRef a, TermRef b) {
    Pool& p = pool();
    auto key = std::make_pair(a, b);
    auto it = p.pairs.find(key);
    if (it != p.pairs.end()) return it->second;
    Term* t = p.fresh();
    t->kind = TermKind::pair;
    t->degree = a->degree + b->degree;
    t->left = a;
    t->right = b;
    p.pairs.emplace(key, t);
    return t;
}

TermRef word_term(std::vector<TermRef> letters) {
    Pool& p = pool();
    auto it = p.words.find(letters);
    if (it != p.words.end()) return it->second;
    Term* t = p.fresh();
    t->kind = TermKind::word;
    for (TermRef l : letters) t->degree += l->degree;
    t->letters = std::move(letters);
    p.words.emplace(t->letters, t);
    return t;
}

TermRef shift_term(TermRef c, int dir) {
    Pool& p = pool();
    auto key = std::make_pair(c, dir);
    auto it = p.shifts.find(key);
    if (it != p.shifts.end()) return it->second;
    Term* t = p.fresh();
    t->kind = TermKind::shift;
    t->dir = dir;
    t->degree = c->degree + dir;
    t->child = c;
    p.shifts.emplace(key, t);
    return t;
}

std::string to_string(TermRef t) {
    switch (t->kind) {
        case TermKind::atom:
            return t->name;
        case TermKind::pair:
            return "(" + to_string(t->left) + "&" + to_string(t->right) + ")";
        case TermKind::shift:
            return (t->dir > 0 ? "s[" : "s'[") + to_string(t->child) + "]";
        case TermKind::word: {
            std::string r = "[";
            for (size_t i = 0; i < t->letters.size(); ++i) {
                if (i) r += "|";
                r += to_string(t->letters[i]);
            }
            return r + "]";
        }
    }
    return "?";
}

std::string to_string(const FormalSum& s) {
    if (s.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, k] : s.c) {
        if (k > 0 && !first) os << "+";
        if (k == -1)
            os << "-";
        else if (k != 1)
            os << k << "*";
        os << to_string(t);
        first = false;
    }
    return os.str();
}

}  // namespace cohoch

// Command-line front end: build, shell, verify, atoms, criterion, cm-check, betti, export-dot.

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vshell/vshell.hpp"

namespace {

using namespace vshell;

constexpr int exit_ok = 0;
constexpr int exit_verification = 2;
constexpr int exit_budget = 3;
constexpr int exit_bad_input = 4;

/// Where a command gets its poset from: a JSON file, or a Veronese interval [0, z].
struct PosetSource {
    std::string poset_file;
    std::size_t n = 0;
    std::string z_text;
    std::size_t m = 0;  // 0 = pinched

    void add_options(CLI::App* cmd) {
        cmd->add_option("--poset", poset_file, "poset JSON file");
        cmd->add_option("--n", n, "dimension of the Veronese space");
        cmd->add_option("--z", z_text, "interval top, e.g. 2,3,3,4");
        cmd->add_option("--m", m, "use the plain space V_{m,n} instead of the pinched one");
    }

    bool is_veronese() const { return poset_file.empty(); }

    LatticeVector z() const {
        auto v = LatticeVector::parse(z_text);
        if (v.size() != n) throw InvalidInput("--z has " + std::to_string(v.size()) + " coordinates but --n is " + std::to_string(n));
        return v;
    }

    VeroneseSpace space() const { return m ? VeroneseSpace::plain(m, n) : VeroneseSpace::pinched(n); }

    GradedPoset load() const {
        if (!poset_file.empty()) return poset_from_json(read_json_file(poset_file));
        if (n == 0 || z_text.empty()) throw InvalidInput("give either --poset or both --n and --z");
        return build_interval(space(), z());
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InvalidInput("cannot write " + out_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit_json(const std::string& out_path, const Json& j) { emit(out_path, j.dump(1)); }

std::vector<ElementId> parse_ids(const std::string& text) {
    std::vector<ElementId> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(static_cast<ElementId>(std::stoul(tok)));
        } catch (const std::exception&) {
            throw InvalidInput("malformed element id list: " + text);
        }
    }
    return out;
}

/// "L:k", "S:k" or "ELL:l:k"; k may be omitted for the whole family.
Assertion parse_assertion(const std::string& text, const PinchedSheller& sheller, const LatticeVector& z) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    auto number = [&](const std::string& s) -> std::size_t {
        try {
            std::size_t pos = 0;
            auto v = std::stoul(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InvalidInput("malformed assertion: " + text);
        }
    };
    Assertion a;
    a.z = z;
    if (parts.empty()) throw InvalidInput("empty assertion");
    std::string kind = parts[0];
    for (auto& c : kind) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (kind == "L" || kind == "S") {
        if (parts.size() > 2) throw InvalidInput("malformed assertion: " + text);
        a.kind = kind == "L" ? AssertionKind::L : AssertionKind::S;
        a.k = parts.size() == 2 ? number(parts[1]) : sheller.family(a.kind, 0).size();
    } else if (kind == "ELL") {
        if (parts.size() < 2 || parts.size() > 3) throw InvalidInput("malformed assertion: " + text);
        a.kind = AssertionKind::Ell;
        a.ell = number(parts[1]);
        a.k = parts.size() == 3 ? number(parts[2]) : sheller.family(a.kind, a.ell).size();
    } else {
        throw InvalidInput("unknown assertion kind in " + text);
    }
    return a;
}

/// Atom order of a Veronese-payload poset by a catalog order, or from a JSON id list file.
AtomOrder atom_order_for(const GradedPoset& p, const std::string& source) {
    if (source == "L" || source == "S") {
        auto at = atoms(p);
        if (at.empty()) return {};
        const std::size_t n = p.payload(at[0]).size();
        auto cat = atom_catalog(n);
        const auto& fam = source == "L" ? cat->l_order : cat->s_order;
        AtomOrder out;
        for (const auto& a : fam)
            if (auto id = p.find(a.to_payload()); id && p.covers(p.bottom(), *id)) out.push_back(*id);
        if (out.size() != at.size()) throw InvalidInput("poset atoms are not atoms of the pinched Veronese poset");
        return out;
    }
    try {
        return read_json_file(source).get<AtomOrder>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("atom order file must be a JSON list of element ids: " + std::string(e.what()));
    }
}

int run_build(const PosetSource& src, const std::string& out) {
    auto p = src.load();
    emit_json(out, poset_to_json(p));
    std::cerr << "poset " << poset_hash(p) << ": " << p.size() << " elements, " << p.cover_count() << " covers, rank "
              << p.max_rank() << "\n";
    return exit_ok;
}

struct ShellOptions {
    std::string assertion;
    bool debug_verify = false;
    bool certificate = false;
    std::size_t max_rank = 6;
    std::size_t memo_cap = 2'000'000;
    std::uint64_t chain_budget = default_chain_budget;
    std::string out;
    std::string poset_out;
    unsigned threads = 1;
};

int run_shell(const PosetSource& src, const ShellOptions& o) {
    if (!src.poset_file.empty() || src.m) throw InvalidInput("shell works on pinched Veronese intervals: give --n and --z");
    if (src.n == 0 || src.z_text.empty()) throw InvalidInput("shell needs --n and --z");
    const auto z = src.z();
    PinchedSheller sheller(src.n, ShellerConfig{o.max_rank, o.memo_cap, o.debug_verify, o.chain_budget});
    const auto& iv = sheller.interval(z);
    ChainOrder order;
    ShellingVerification check;
    std::string what = "full interval";
    if (o.assertion.empty()) {
        order = sheller.shell_pinched_interval(z);
        check = verify_shelling(iv.poset, order, o.threads, o.chain_budget);
    } else {
        auto a = parse_assertion(o.assertion, sheller, z);
        what = "assertion " + a.to_string();
        order = sheller.shell(a);
        check = verify_A_shelling(iv.poset, sheller.atom_order(a), order, o.threads, o.chain_budget);
    }
    if (!check.ok()) {
        std::cerr << what << ": verification failed: " << check.report.message << "\n";
        return exit_verification;
    }
    Json j = o.certificate ? certificate_to_json(iv.poset, *check.certificate) : shelling_to_json(iv.poset, order);
    emit_json(o.out, j);
    if (!o.poset_out.empty()) write_json_file(o.poset_out, poset_to_json(iv.poset));
    const auto& s = sheller.stats();
    std::cerr << what << " of [0, " << z.to_string() << "]: " << order.size() << " chains, certified; assertions "
              << s.assertions_computed << ", memo hits " << s.memo_hits << ", criterion I " << s.criterion_I
              << ", criterion II " << s.criterion_II << ", restrictions " << s.restrictions << ", family searches "
              << s.family_searches << ", brute-force fallbacks " << s.brute_force_fallbacks << "\n";
    return exit_ok;
}

int run_verify(const PosetSource& src, const std::string& shelling_file, const std::string& atom_order, unsigned threads) {
    auto p = src.load();
    auto order = shelling_from_json(read_json_file(shelling_file), &p);
    ShellingVerification r = atom_order.empty() ? verify_shelling(p, order, threads)
                                                : verify_A_shelling(p, atom_order_for(p, atom_order), order, threads);
    Json j;
    j["poset"] = poset_hash(p);
    j["status"] = to_string(r.report.status);
    j["chains"] = order.size();
    if (!r.ok()) {
        j["message"] = r.report.message;
        if (r.report.status == ShellingReport::Status::sh_violated) j["failing_pair"] = {r.report.later, r.report.earlier};
    } else {
        j["homology_facets"] = r.certificate->homology_facet_count();
    }
    emit_json("", j);
    std::cerr << (r.ok() ? "certified" : "not certified: " + r.report.message) << "\n";
    return r.ok() ? exit_ok : exit_verification;
}

int run_atoms(std::size_t n, const std::string& order, std::size_t ell) {
    if (n < 2) throw InvalidInput("atoms needs --n >= 2");
    auto cat = atom_catalog(n);
    std::vector<LatticeVector> list;
    if (ell) {
        list = cat->ell(ell);
        if (order == "S") throw InvalidInput("--ell lists A^(l) in the L order only");
    } else if (order == "L") {
        list = cat->l_order;
    } else if (order == "S") {
        list = cat->s_order;
    } else {
        throw InvalidInput("--order must be L or S");
    }
    for (const auto& a : list) std::cout << a.to_string() << '\n';
    return exit_ok;
}

struct CriterionOptions {
    std::string which;
    bool check_only = false;
    std::string assertion;
    std::size_t ell = 0;
    std::string atoms_text;
    std::string a_plus_text;
    std::string a_prime_text;
    std::string out;
};

std::string pair_text(const GradedPoset& p, ElementId a, ElementId b) {
    auto name = [&](ElementId x) {
        std::string s = std::to_string(x) + " (";
        for (std::size_t i = 0; i < p.payload(x).size(); ++i) s += (i ? "," : "") + std::to_string(p.payload(x)[i]);
        return s + ")";
    };
    return name(a) + ", " + name(b);
}

/// Shelling of the chains in `chains`, with chains grouped by the rank of their
/// atom in `atom_rank` when given.
ChainOrder search_or_fail(const ChainOrder& chains, const std::unordered_map<ElementId, std::size_t>* atom_rank,
                          const std::string& what) {
    auto r = search_shelling_order(chains, SearchBudget{}, atom_rank);
    if (r.status == SearchResult::Status::budget_exceeded) throw BudgetExceeded("search for a shelling of " + what + " ran out of budget");
    if (r.status != SearchResult::Status::found) throw VerificationFailure("no shelling of " + what + " exists");
    return r.order;
}

int run_criterion(const PosetSource& src, const CriterionOptions& o) {
    auto P = src.load();
    const ElementId top = P.require_top();
    AtomOrder A;
    std::optional<ElementId> a_plus;
    std::vector<ElementId> A_prime;

    if (src.is_veronese()) {
        auto iv = build_veronese_interval(src.space(), src.z());
        if (src.m) throw InvalidInput("criterion contexts from assertions need the pinched space");
        PinchedSheller sheller(src.n);
        auto by_vec = [&](const LatticeVector& x) { return *P.find(x.to_payload()); };
        if (o.which == "iii") {
            if (o.ell < 1 || o.ell >= src.n) throw InvalidInput("criterion iii needs --ell in 1..n-1");
            for (const auto& a : sheller.family(AssertionKind::L, 0))
                if (iv.find(a)) A.push_back(by_vec(a));
            for (const auto& a : sheller.family(AssertionKind::Ell, o.ell))
                if (iv.find(a)) A_prime.push_back(by_vec(a));
        } else {
            if (o.assertion.empty()) throw InvalidInput("criterion i/ii on a Veronese interval needs --assertion L:k or S:k");
            auto a = parse_assertion(o.assertion, sheller, src.z());
            if (a.kind == AssertionKind::Ell) throw InvalidInput("criterion i/ii contexts come from L or S assertions");
            const auto& fam = sheller.family(a.kind, 0);
            if (a.k < 2) throw InvalidInput("the context needs k >= 2");
            if (!iv.find(fam[a.k - 1])) throw InvalidInput("the k-th atom " + fam[a.k - 1].to_string() + " is not in the interval");
            for (std::size_t i = 0; i + 1 < a.k; ++i)
                if (iv.find(fam[i])) A.push_back(by_vec(fam[i]));
            a_plus = by_vec(fam[a.k - 1]);
        }
    } else {
        A = parse_ids(o.atoms_text);
        if (o.which == "iii") {
            A_prime = parse_ids(o.a_prime_text);
        } else {
            auto ap = parse_ids(o.a_plus_text);
            if (ap.size() != 1) throw InvalidInput("--a-plus must name exactly one atom");
            a_plus = ap[0];
        }
    }
    for (ElementId a : A)
        if (a >= P.size()) throw InvalidInput("atom id out of range");

    Json report;
    report["criterion"] = o.which;
    bool ok = true;
    std::optional<CriterionContext> ctx;
    if (o.which == "i" || o.which == "ii") {
        if (*a_plus >= P.size()) throw InvalidInput("a+ id out of range");
        ctx = compute_context(P, A, *a_plus);
        report["Q"] = ctx->Q;
        Json witnesses = Json::array();
        if (o.which == "i") {
            for (ElementId q : ctx->Q)
                if (auto bad = check_edge_falling(*ctx, q)) {
                    ok = false;
                    witnesses.push_back({{"q", q}, {"p", bad->first}, {"q_prime", bad->second}});
                    std::cerr << "edge falling fails at q = " << q << ": (p, q') = (" << pair_text(P, bad->first, bad->second) << ")\n";
                }
        } else if (auto bad = check_criterion_II_condition(*ctx)) {
            ok = false;
            witnesses.push_back({{"q", bad->first}, {"p", bad->second}});
            std::cerr << "condition (iii) fails at (q, p) = (" << pair_text(P, bad->first, bad->second) << ")\n";
        }
        report["witnesses"] = witnesses;
    } else if (o.which == "iii") {
        if (auto bad = check_criterion_III_condition(P, A, A_prime)) {
            ok = false;
            report["witnesses"] = Json::array({{{"b", bad->first}, {"p", bad->second}}});
            std::cerr << "condition (ii) fails at (b, p) = (" << pair_text(P, bad->first, bad->second) << ")\n";
        } else {
            report["witnesses"] = Json::array();
        }
    } else {
        throw InvalidInput("criterion must be one of i, ii, iii");
    }
    report["preconditions"] = ok;
    if (o.check_only || !ok) {
        emit_json(o.out, report);
        if (ok) std::cerr << "preconditions hold\n";
        return ok ? exit_ok : exit_verification;
    }

    // Build the combined order from searched sub-shellings and certify it.
    std::unordered_map<ElementId, std::size_t> rank_A;
    for (std::size_t i = 0; i < A.size(); ++i) rank_A.emplace(A[i], i);
    auto shelling_PA = search_or_fail(enumerate_chains_through(P, A), &rank_A, "P<A>");
    ChainOrder out;
    AtomOrder result_atoms;
    if (o.which == "iii") {
        out = criterion_III_restrict(P, A, A_prime, shelling_PA);
        result_atoms = A_prime;
    } else if (o.which == "i") {
        std::map<ElementId, ChainOrder> lower, upper;
        for (ElementId q : ctx->Q) {
            auto iv = closed_interval(P, ctx->a_plus, q);
            lower[q] = iv.order_to_parent(search_or_fail(enumerate_maximal_chains(iv.poset), nullptr, "[a+, q]"));
            auto chains = detail::upper_chains(*ctx, q);
            upper[q] = chains.size() <= 1 ? chains : search_or_fail(chains, nullptr, "I(q)<A(q)>");
        }
        out = criterion_I_combine(*ctx, shelling_PA, lower, upper, true);
        result_atoms = A;
        result_atoms.push_back(*a_plus);
    } else {
        AtomOrder on_I = ctx->A_of(ctx->a_plus);
        for (ElementId b : ctx->A_all_of(ctx->a_plus))
            if (std::find(on_I.begin(), on_I.end(), b) == on_I.end()) on_I.push_back(b);
        ChainOrder upper{{ctx->a_plus}};
        if (ctx->a_plus != top) {
            auto iv = closed_interval(P, ctx->a_plus, top);
            std::unordered_map<ElementId, std::size_t> rank_I;
            for (std::size_t i = 0; i < on_I.size(); ++i) rank_I.emplace(*iv.to_local(on_I[i]), i);
            upper = iv.order_to_parent(search_or_fail(enumerate_maximal_chains(iv.poset), &rank_I, "I(a+)"));
        }
        out = criterion_II_combine(*ctx, shelling_PA, upper, on_I, true);
        result_atoms = A;
        result_atoms.push_back(*a_plus);
    }
    auto v = verify_A_shelling(P, result_atoms, out);
    if (!v.ok()) {
        std::cerr << "combined order failed verification: " << v.report.message << "\n";
        return exit_verification;
    }
    report["shelling"] = shelling_to_json(P, out);
    emit_json(o.out, report);
    std::cerr << "combined order of " << out.size() << " chains certified\n";
    return exit_ok;
}

int run_cm(const PosetSource& src, std::uint64_t max_faces, const std::string& out) {
    auto p = src.load();
    auto r = is_cohen_macaulay_Q(p, max_faces);
    Json j;
    j["poset"] = poset_hash(p);
    j["cohen_macaulay"] = r.cohen_macaulay;
    if (r.failing_interval) {
        j["failing_interval"] = {r.failing_interval->first, r.failing_interval->second};
        j["betti"] = {{"minus_one", r.failing_betti.minus_one}, {"by_dim", r.failing_betti.by_dim}};
    }
    emit_json(out, j);
    std::cerr << (r.cohen_macaulay ? "Cohen-Macaulay over Q" : "not Cohen-Macaulay over Q") << "\n";
    return r.cohen_macaulay ? exit_ok : exit_verification;
}

int run_betti(const PosetSource& src, std::uint64_t max_faces, const std::string& out) {
    auto p = src.load();
    auto b = reduced_betti(order_complex(p), max_faces);
    Json j;
    j["poset"] = poset_hash(p);
    j["minus_one"] = b.minus_one;
    j["by_dim"] = b.by_dim;
    j["mobius"] = p.top() ? mobius(p, p.bottom(), *p.top()) : 0;
    emit_json(out, j);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified shellings of pinched Veronese intervals"};
    app.require_subcommand(1);

    PosetSource src;
    std::string out;
    unsigned threads = 1;

    auto* build = app.add_subcommand("build", "build an interval and write its poset JSON");
    src.add_options(build);
    build->add_option("--out", out, "output file (default stdout)");

    ShellOptions sh;
    auto* shell = app.add_subcommand("shell", "construct a certified shelling of [0, z]");
    src.add_options(shell);
    shell->add_option("--assertion", sh.assertion, "L:k, S:k or ELL:l:k (default: the whole interval)");
    shell->add_flag("--debug-verify", sh.debug_verify, "re-verify every construction step");
    shell->add_flag("--certificate", sh.certificate, "include [i, i', i*] witness triples");
    shell->add_option("--max-rank", sh.max_rank, "largest rank accepted")->check(CLI::PositiveNumber);
    shell->add_option("--memo-cap", sh.memo_cap, "largest number of memoized assertions")->check(CLI::PositiveNumber);
    shell->add_option("--chain-budget", sh.chain_budget, "largest chain enumeration")->check(CLI::PositiveNumber);
    shell->add_option("--out", sh.out, "shelling JSON output (default stdout)");
    shell->add_option("--poset-out", sh.poset_out, "also write the interval's poset JSON");
    shell->add_option("--threads", sh.threads, "verification threads")->check(CLI::PositiveNumber);

    std::string shelling_file, atom_order;
    auto* verify = app.add_subcommand("verify", "check a shelling JSON against a poset");
    src.add_options(verify);
    verify->add_option("--shelling", shelling_file, "shelling JSON")->required();
    verify->add_option("--atom-order", atom_order, "L, S or a JSON file of atom ids (A-shelling check)");
    verify->add_option("--threads", threads, "verification threads")->check(CLI::PositiveNumber);

    std::size_t atoms_n = 0, ell = 0;
    std::string order = "L";
    auto* atoms_cmd = app.add_subcommand("atoms", "list the atoms of the pinched Veronese poset");
    atoms_cmd->add_option("--n", atoms_n, "dimension")->required();
    atoms_cmd->add_option("--order", order, "L or S")->check(CLI::IsMember({"L", "S"}));
    atoms_cmd->add_option("--ell", ell, "list A^(l) instead of all atoms");

    CriterionOptions co;
    auto* crit = app.add_subcommand("criterion", "check the preconditions of a criterion and build its order");
    crit->add_option("which", co.which, "i, ii or iii")->required()->check(CLI::IsMember({"i", "ii", "iii"}));
    src.add_options(crit);
    crit->add_flag("--check-only", co.check_only, "only run the precondition checkers");
    crit->add_option("--assertion", co.assertion, "for i/ii on an interval: L:k or S:k, a+ = k-th atom");
    crit->add_option("--ell", co.ell, "for iii on an interval: restrict A^all to A^(l+1)");
    crit->add_option("--atoms", co.atoms_text, "for --poset: comma-separated atom ids of A, in order");
    crit->add_option("--a-plus", co.a_plus_text, "for --poset with i/ii: the new atom");
    crit->add_option("--a-prime", co.a_prime_text, "for --poset with iii: the kept atoms");
    crit->add_option("--out", co.out, "report JSON output (default stdout)");

    std::uint64_t max_faces = 10'000;
    auto* cm = app.add_subcommand("cm-check", "Cohen-Macaulay test over the rationals");
    src.add_options(cm);
    cm->add_option("--max-faces", max_faces, "face budget per interval")->check(CLI::PositiveNumber);
    cm->add_option("--out", out, "output file (default stdout)");

    auto* betti = app.add_subcommand("betti", "reduced Betti numbers of the order complex");
    src.add_options(betti);
    betti->add_option("--max-faces", max_faces, "face budget")->check(CLI::PositiveNumber);
    betti->add_option("--out", out, "output file (default stdout)");

    auto* dot = app.add_subcommand("export-dot", "Hasse diagram in Graphviz DOT");
    src.add_options(dot);
    dot->add_option("--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_bad_input;
    }

    try {
        if (*build) return run_build(src, out);
        if (*shell) return run_shell(src, sh);
        if (*verify) return run_verify(src, shelling_file, atom_order, threads);
        if (*atoms_cmd) return run_atoms(atoms_n, order, ell);
        if (*crit) return run_criterion(src, co);
        if (*cm) return run_cm(src, max_faces, out);
        if (*betti) return run_betti(src, max_faces, out);
        if (*dot) {
            emit(out, to_dot(src.load()));
            return exit_ok;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return exit_verification;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const std::domain_error& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return exit_bad_input;
    }
    return exit_bad_input;
}

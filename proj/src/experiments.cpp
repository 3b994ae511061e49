#include "chaincatch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "chaincatch/config.hpp"
#include "chaincatch/error.hpp"

namespace chaincatch {

MatrixSpec MatrixSpec::defaults() {
    MatrixSpec s;
    s.escapee_strategies.assign(std::begin(kAllEscapeeStrategies), std::end(kAllEscapeeStrategies));
    s.chain_strategies.assign(std::begin(kAllChainStrategies), std::end(kAllChainStrategies));
    s.agent_counts = {10};
    s.arena = Arena::with_size(75, 75);
    s.params = StrategyParams::defaults_for(s.arena);
    return s;
}

void MatrixSpec::validate() const {
    if (runs_per_cell < 1) throw InvariantError("runs_per_cell must be >= 1");
    arena.validate();
    params.validate(arena);
    for (int n : agent_counts)
        if (n < 3) throw InvariantError("agent count " + std::to_string(n) + " is below the minimum of 3");
}

std::uint64_t run_seed(std::uint64_t base_seed, ChainStrategy chain, EscapeeStrategy escapee, int n_agents,
                       int run) {
    return hash_seed({base_seed, static_cast<std::uint64_t>(chain), static_cast<std::uint64_t>(escapee),
                      static_cast<std::uint64_t>(n_agents), static_cast<std::uint64_t>(run)});
}

GameConfig run_config(const MatrixSpec& spec, ChainStrategy chain, EscapeeStrategy escapee, int n_agents, int run) {
    GameConfig c;
    c.arena = spec.arena;
    c.params = spec.params;
    c.n_agents = n_agents;
    c.chain_strategy = chain;
    c.escapee_strategy = escapee;
    c.seed = run_seed(spec.base_seed, chain, escapee, n_agents, run);
    return c;
}

double CellStats::ranking_mean() const noexcept {
    return all_timeout() ? std::numeric_limits<double>::infinity() : mean;
}

CellStats summarize_cell(ChainStrategy chain, EscapeeStrategy escapee, int n_agents,
                         const std::vector<Outcome>& outcomes) {
    CellStats s{chain, escapee, n_agents};
    std::vector<double> done;
    for (const auto& o : outcomes) {
        ++s.runs;
        if (o.kind == OutcomeKind::Complete) done.push_back(o.cycles);
        else ++s.timeouts;
    }
    // Sorting first makes the sums independent of the order runs finished in.
    std::sort(done.begin(), done.end());
    s.completed = static_cast<int>(done.size());
    if (done.empty()) return s;
    double sum = 0.0;
    for (double t : done) sum += t;
    s.mean = sum / done.size();
    if (done.size() > 1) {
        double sq = 0.0;
        for (double t : done) sq += (t - s.mean) * (t - s.mean);
        s.stddev = std::sqrt(sq / (done.size() - 1));
    }
    return s;
}

const CellStats* TransitionTable::find(ChainStrategy chain, EscapeeStrategy escapee, int n_agents) const {
    for (const auto& c : cells)
        if (c.chain == chain && c.escapee == escapee && c.n_agents == n_agents) return &c;
    return nullptr;
}

TransitionTable tabulate(const MatrixSpec& spec, std::vector<RunResult> runs) {
    TransitionTable t;
    t.escapee_strategies = spec.escapee_strategies;
    t.chain_strategies = spec.chain_strategies;
    t.agent_counts = spec.agent_counts;
    t.max_steps = spec.arena.max_steps;
    for (int n : spec.agent_counts)
        for (auto cs : spec.chain_strategies)
            for (auto es : spec.escapee_strategies) {
                std::vector<RunResult> mine;
                for (const auto& r : runs)
                    if (r.n_agents == n && r.chain == cs && r.escapee == es) mine.push_back(r);
                std::sort(mine.begin(), mine.end(), [](const RunResult& a, const RunResult& b) { return a.run < b.run; });
                std::vector<Outcome> outcomes;
                for (const auto& r : mine) outcomes.push_back(r.outcome);
                t.cells.push_back(summarize_cell(cs, es, n, outcomes));
                t.runs.insert(t.runs.end(), mine.begin(), mine.end());
            }
    return t;
}

TransitionTable run_batch(const MatrixSpec& spec, int threads) {
    spec.validate();
    std::vector<RunResult> jobs;
    for (int n : spec.agent_counts)
        for (auto cs : spec.chain_strategies)
            for (auto es : spec.escapee_strategies)
                for (int r = 0; r < spec.runs_per_cell; ++r)
                    jobs.push_back({cs, es, n, r, run_seed(spec.base_seed, cs, es, n, r), {}});

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            auto& job = jobs[i];
            try {
                job.outcome = play_game(run_config(spec, job.chain, job.escapee, job.n_agents, job.run));
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::make_exception_ptr(InvariantError(
                        "cell chain=" + std::string(to_string(job.chain)) + " escapee=" +
                        std::string(to_string(job.escapee)) + " n=" + std::to_string(job.n_agents) + " run " +
                        std::to_string(job.run) + ": " + e.what()));
                next = jobs.size();
                return;
            }
        }
    };
    const int count = std::max(1, threads);
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return tabulate(spec, std::move(jobs));
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotEvaluable: return "not-evaluable";
    }
    return "?";
}

namespace {

Verdict combine(const std::vector<OrderingLine>& lines) {
    bool any = false;
    for (const auto& l : lines) {
        if (l.verdict == Verdict::Fail) return Verdict::Fail;
        any |= l.verdict == Verdict::Pass;
    }
    return any ? Verdict::Pass : Verdict::NotEvaluable;
}

template <typename Strategy, std::size_t N>
OrderingLine order_line(int n, std::string fixed, const Strategy (&expected)[N],
                        const std::vector<Strategy>& present, auto&& lookup, bool descending) {
    OrderingLine line{n, std::move(fixed), {}, Verdict::NotEvaluable};
    std::vector<std::pair<double, Strategy>> ranked;
    for (auto s : present)
        if (const CellStats* c = lookup(s)) ranked.emplace_back(c->ranking_mean(), s);
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        return descending ? a.first > b.first : a.first < b.first;
    });
    for (const auto& [m, s] : ranked) line.order.emplace_back(to_string(s));

    std::vector<double> means;
    for (auto s : expected) {
        const CellStats* c = lookup(s);
        if (!c || std::find(present.begin(), present.end(), s) == present.end()) return line;
        means.push_back(c->ranking_mean());
    }
    line.verdict = Verdict::Pass;
    for (std::size_t i = 0; i + 1 < means.size(); ++i)
        if (!(means[i] < means[i + 1])) line.verdict = Verdict::Fail;
    return line;
}

} // namespace

Verdict OrderingReport::escapee_verdict() const { return combine(escapee_lines); }
Verdict OrderingReport::chain_verdict() const { return combine(chain_lines); }

OrderingReport summarize_orderings(const TransitionTable& table) {
    OrderingReport report;
    for (int n : table.agent_counts) {
        for (auto cs : table.chain_strategies) {
            auto lookup = [&](EscapeeStrategy es) { return table.find(cs, es, n); };
            report.escapee_lines.push_back(order_line(n, std::string(to_string(cs)), kExpectedEscapeeOrder,
                                                      table.escapee_strategies, lookup, true));
        }
        for (auto es : table.escapee_strategies) {
            auto lookup = [&](ChainStrategy cs) { return table.find(cs, es, n); };
            report.chain_lines.push_back(order_line(n, std::string(to_string(es)), kExpectedChainOrder,
                                                    table.chain_strategies, lookup, false));
        }
    }
    return report;
}

std::string OrderingReport::render() const {
    std::string out;
    auto emit = [&](std::string_view what, const std::vector<OrderingLine>& lines, std::string_view sep) {
        for (const auto& l : lines) {
            out += std::string(what) + " n=" + std::to_string(l.n_agents) + " " + l.fixed + ": ";
            for (std::size_t i = 0; i < l.order.size(); ++i) {
                if (i) out += sep;
                out += l.order[i];
            }
            out += " [" + std::string(to_string(l.verdict)) + "]\n";
        }
    };
    emit("escapees by T_c, chain", escapee_lines, " > ");
    emit("chains by T_c, escapee", chain_lines, " < ");
    out += "escapee ordering: " + std::string(to_string(escapee_verdict())) + "\n";
    out += "chain ordering: " + std::string(to_string(chain_verdict())) + "\n";
    return out;
}

std::string format_cell(const CellStats& cell, int max_steps) {
    if (cell.all_timeout()) return ">" + std::to_string(max_steps);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f±%.1f", cell.mean, cell.stddev);
    return buf;
}

std::string export_csv(const TransitionTable& table) {
    std::string out = "n,chain";
    for (auto es : table.escapee_strategies) out += "," + std::string(to_string(es));
    out += "\n";
    for (int n : table.agent_counts)
        for (auto cs : table.chain_strategies) {
            out += std::to_string(n) + "," + std::string(to_string(cs));
            for (auto es : table.escapee_strategies) {
                const CellStats* c = table.find(cs, es, n);
                out += "," + (c ? format_cell(*c, table.max_steps) : std::string());
            }
            out += "\n";
        }
    return out;
}

std::string export_runs(const TransitionTable& table) {
    std::string out;
    for (const auto& r : table.runs) {
        out += "run n=" + std::to_string(r.n_agents) + " chain=" + std::string(to_string(r.chain)) +
               " escapee=" + std::string(to_string(r.escapee)) + " index=" + std::to_string(r.run) +
               " seed=" + std::to_string(r.seed) + " outcome=" +
               (r.outcome.kind == OutcomeKind::Complete ? "complete" : "timeout") +
               " cycles=" + std::to_string(r.outcome.cycles) + "\n";
    }
    return out;
}

std::vector<RunResult> parse_runs(std::string_view text) {
    std::vector<RunResult> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        if (word != "run") throw ParseError("expected a 'run' line", line_no);
        RunResult r{};
        int seen = 0;
        while (fields >> word) {
            const auto eq = word.find('=');
            if (eq == std::string::npos) throw ParseError("field without '=': " + word, line_no);
            const std::string key = word.substr(0, eq), value = word.substr(eq + 1);
            ++seen;
            if (key == "n") r.n_agents = int(parse_integer(value, key, line_no));
            else if (key == "index") r.run = int(parse_integer(value, key, line_no));
            else if (key == "cycles") r.outcome.cycles = int(parse_integer(value, key, line_no));
            else if (key == "seed") r.seed = parse_seed(value, key, line_no);
            else if (key == "chain") {
                const auto cs = parse_chain_strategy(value);
                if (!cs) throw ParseError("unknown chain strategy '" + value + "'", line_no);
                r.chain = *cs;
            } else if (key == "escapee") {
                const auto es = parse_escapee_strategy(value);
                if (!es) throw ParseError("unknown escapee strategy '" + value + "'", line_no);
                r.escapee = *es;
            } else if (key == "outcome") {
                if (value == "complete") r.outcome.kind = OutcomeKind::Complete;
                else if (value == "timeout") r.outcome.kind = OutcomeKind::Timeout;
                else throw ParseError("unknown outcome '" + value + "'", line_no);
            } else {
                throw ParseError("unknown field '" + key + "'", line_no);
            }
        }
        if (seen != 7) throw ParseError("expected 7 fields", line_no);
        out.push_back(r);
    }
    return out;
}

} // namespace chaincatch

/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

// Acceptance suite: prints one PASS/FAIL line per criterion P1..P9 and exits
// nonzero when any of them fails.

#include "mcastsim/network.h"
#include "mcastsim/scenario.h"
#include "mcastsim/sweep.h"

#include "support/oracles.h"
#include "support/properties.h"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

using namespace mcast;
using namespace mcast::testing;

namespace
{

constexpr double kRuntimeTargetSeconds = 15.0 * 60.0;
const std::vector<double> kSpeeds{0, 10, 20, 30, 40, 50};

struct Verdict
{
    std::string id;
    bool passed{false};
    std::string detail;
};

std::string
Fixed(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

// cell key: senders, receivers, attackers, max speed
using CellKey = std::tuple<uint32_t, uint32_t, uint32_t, double>;

struct CellMeans
{
    double pdr{0.0};
    double delayMs{0.0};
    std::size_t runs{0};
    std::size_t delayRuns{0};
};

class SweepTable
{
  public:
    explicit SweepTable(const std::string& csv)
    {
        std::map<CellKey, CellMeans> sums;
        for (const auto& row : ParseCsv(csv))
        {
            const CellKey key{static_cast<uint32_t>(std::stoul(row.at("senders"))),
                              static_cast<uint32_t>(std::stoul(row.at("receivers"))),
                              static_cast<uint32_t>(std::stoul(row.at("attackers"))),
                              std::stod(row.at("max_speed_mps"))};
            auto& c = sums[key];
            c.pdr += std::stod(row.at("pdr"));
            ++c.runs;
            if (row.at("avg_delay_ms") != "NA")
            {
                c.delayMs += std::stod(row.at("avg_delay_ms"));
                ++c.delayRuns;
            }
        }
        for (auto& [key, c] : sums)
        {
            c.pdr /= static_cast<double>(c.runs);
            c.delayMs = c.delayRuns ? c.delayMs / static_cast<double>(c.delayRuns) : NAN;
        }
        m_cells = std::move(sums);
    }

    double Pdr(uint32_t s, uint32_t r, uint32_t a, double v) const
    {
        return At(s, r, a, v).pdr;
    }

    double Delay(uint32_t s, uint32_t r, uint32_t a, double v) const
    {
        return At(s, r, a, v).delayMs;
    }

  private:
    const CellMeans& At(uint32_t s, uint32_t r, uint32_t a, double v) const
    {
        auto it = m_cells.find(CellKey{s, r, a, v});
        if (it == m_cells.end())
        {
            std::ostringstream os;
            os << "sweep has no cell senders=" << s << " receivers=" << r << " attackers=" << a
               << " max_speed=" << v;
            throw std::runtime_error(os.str());
        }
        return it->second;
    }

    std::map<CellKey, CellMeans> m_cells;
};

Verdict
CheckDeterminism(const SweepSpec& spec, const std::string& csvPath, std::string& csvOut)
{
    const unsigned wide = std::max(4u, std::thread::hardware_concurrency());
    using Clock = std::chrono::steady_clock;

    auto t0 = Clock::now();
    const std::string sequential = ToCsv(RunSweep(spec, 1));
    const double seqSeconds = std::chrono::duration<double>(Clock::now() - t0).count();

    t0 = Clock::now();
    const std::string parallel = ToCsv(RunSweep(spec, wide));
    const double parSeconds = std::chrono::duration<double>(Clock::now() - t0).count();

    std::ofstream(csvPath, std::ios::binary) << parallel;
    csvOut = parallel;

    const bool identical = sequential == parallel;
    const double best = std::min(seqSeconds, parSeconds);
    const bool fast = best < kRuntimeTargetSeconds;
    std::ostringstream os;
    os << ExpandSweep(spec).size() << " runs; parallel=1 vs parallel=" << wide << ": "
       << (identical ? "byte-identical" : "DIFFERENT") << "; sweep time " << Fixed(seqSeconds, 1)
       << " s / " << Fixed(parSeconds, 1) << " s (target < " << kRuntimeTargetSeconds << " s)";
    return {"P1", identical && fast, os.str()};
}

Verdict
CheckBaseline()
{
    ScenarioConfig cfg;
    cfg.mobility.vMax = 0.0;
    cfg.radio.lossProb = 0.0;
    cfg.attack.attackerCount = 0;
    cfg.seed = FindConnectedSeed(cfg);
    const auto layout = BuildLayout(cfg);
    const bool connected = IsConnected(layout.positions, cfg.radio.range);
    const auto r = RunScenario(cfg);
    std::ostringstream os;
    os << "seed " << cfg.seed << " connected=" << connected << " generated=" << r.generated
       << " delivered=" << r.delivered << "/" << r.expectedDeliveries << " pdr=" << Fixed(r.pdr, 6);
    return {"P2", connected && r.generated > 0 && r.pdr == 1.0 && !r.pdrUndefined, os.str()};
}

Verdict
CheckAbsorbency()
{
    auto setup = StaticSetup(LineTopology(3, 200.0));
    setup.sources = {0};
    setup.attackers = {1};
    setup.receivers = {2};
    setup.attack.mode = DropMode::Bulk;
    setup.traffic.warmup = Seconds(30);
    setup.traffic.stopAt = Seconds(299);
    Network net(setup);
    net.Start();
    net.RunUntil(Seconds(300));
    const auto r = net.Finish();
    // the attacker must be the only relay
    const auto hops = BfsHops(setup.positions, setup.radio.range, 0);
    const bool onlyPath = hops[1] == 1 && hops[2] == 2;
    std::ostringstream os;
    os << "generated=" << r.generated << " delivered=" << r.delivered
       << " dropped_by_attackers=" << r.droppedByAttackers << " pdr=" << Fixed(r.pdr, 6);
    return {"P3", onlyPath && r.generated > 0 && r.pdr == 0.0 && !r.pdrUndefined, os.str()};
}

Verdict
CheckAttackerTrend(const SweepTable& t)
{
    bool ok = true;
    std::ostringstream os;
    for (double v : {10.0, 30.0, 50.0})
    {
        std::vector<double> series;
        for (uint32_t a : {0u, 1u, 3u, 5u})
        {
            series.push_back(t.Pdr(1, 20, a, v));
        }
        bool strict = true;
        for (std::size_t i = 0; i + 1 < series.size(); ++i)
        {
            strict = strict && series[i] > series[i + 1];
        }
        const double gap = series.front() - series.back();
        ok = ok && strict && gap >= 0.05;
        os << "v=" << v << ": " << Fixed(series[0]) << " > " << Fixed(series[1]) << " > "
           << Fixed(series[2]) << " > " << Fixed(series[3]) << (strict ? " ok" : " NOT strict")
           << ", drop " << Fixed(gap * 100.0, 2) << " pp" << (gap >= 0.05 ? "" : " (< 5)") << "; ";
    }
    return {"P4", ok, os.str()};
}

Verdict
CheckReceiverResilience(const SweepTable& t)
{
    bool ok = true;
    std::ostringstream os;
    for (uint32_t s : {1u, 3u})
    {
        for (uint32_t a : {3u, 5u})
        {
            int hits = 0;
            for (double v : kSpeeds)
            {
                hits += t.Pdr(s, 30, a, v) >= t.Pdr(s, 20, a, v) ? 1 : 0;
            }
            ok = ok && hits >= 5;
            os << "senders=" << s << " attackers=" << a << ": " << hits << "/6; ";
        }
    }
    return {"P5", ok, os.str()};
}

Verdict
CheckSenderResilience(const SweepTable& t)
{
    bool ok = true;
    std::ostringstream os;
    for (uint32_t a : {3u, 5u})
    {
        int hits = 0;
        for (double v : kSpeeds)
        {
            hits += t.Pdr(3, 20, a, v) >= t.Pdr(1, 20, a, v) ? 1 : 0;
        }
        ok = ok && hits >= 5;
        os << "attackers=" << a << ": " << hits << "/6; ";
    }
    return {"P6", ok, os.str()};
}

Verdict
CheckMobilityDegradation(const SweepTable& t)
{
    std::vector<double> series;
    for (double v : kSpeeds)
    {
        series.push_back(t.Pdr(1, 20, 0, v));
    }
    int inversions = 0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
    {
        inversions += series[i + 1] > series[i] ? 1 : 0;
    }
    const double drop = series.front() - series.back();
    std::ostringstream os;
    os << "series";
    for (double p : series)
    {
        os << ' ' << Fixed(p);
    }
    os << "; drop " << Fixed(drop * 100.0, 2) << " pp (need >= 2); inversions " << inversions;
    return {"P7", drop >= 0.02 && inversions <= 1, os.str()};
}

Verdict
CheckDelayTrends(const SweepTable& t)
{
    bool ok = true;
    std::ostringstream os;
    os << "(a) ";
    for (double v : {10.0, 30.0})
    {
        bool mono = true;
        double prev = -INFINITY;
        for (uint32_t a : {0u, 1u, 3u, 5u})
        {
            const double d = t.Delay(1, 20, a, v);
            mono = mono && d >= prev;
            prev = d;
        }
        ok = ok && mono;
        os << "v=" << v << (mono ? " ok" : " NOT monotone") << "; ";
    }
    // group size: speed-pooled means at each sender count
    os << "(b) ";
    for (uint32_t s : {1u, 3u})
    {
        for (uint32_t a : {0u, 5u})
        {
            double d20 = 0.0;
            double d30 = 0.0;
            for (double v : kSpeeds)
            {
                d20 += t.Delay(s, 20, a, v) / kSpeeds.size();
                d30 += t.Delay(s, 30, a, v) / kSpeeds.size();
            }
            const bool higher = d30 > d20;
            ok = ok && higher;
            os << "senders=" << s << " attackers=" << a << ": 30rx " << Fixed(d30, 3)
               << " ms vs 20rx " << Fixed(d20, 3) << " ms" << (higher ? "" : " NOT higher")
               << "; ";
        }
    }
    return {"P8", ok, os.str()};
}

Verdict
CheckProperties()
{
    std::ostringstream os;
    bool ok = true;
    for (const auto& p : RunPropertySuite())
    {
        ok = ok && p.passed;
        os << p.name << (p.passed ? " ok" : " FAILED: " + p.detail) << "; ";
    }
    return {"P9", ok, os.str()};
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite"};
    std::string specPath = MCASTSIM_SOURCE_DIR "/scenarios/acceptance-sweep.spec";
    std::string csvPath = "acceptance-sweep.csv";
    std::string reuseCsv;
    app.add_option("--spec", specPath, "Sweep spec for P1 and the trend checks")
        ->check(CLI::ExistingFile);
    app.add_option("--csv", csvPath, "Where to write the sweep CSV");
    app.add_option("--from-csv", reuseCsv,
                   "Evaluate P4-P8 on an existing CSV and skip the P1 sweeps")
        ->check(CLI::ExistingFile);
    CLI11_PARSE(app, argc, argv);

    std::vector<Verdict> verdicts;
    auto guarded = [&](const std::string& id, auto&& fn) {
        try
        {
            verdicts.push_back(fn());
        }
        catch (const std::exception& e)
        {
            verdicts.push_back({id, false, std::string("error: ") + e.what()});
        }
        const auto& v = verdicts.back();
        std::cout << v.id << ' ' << (v.passed ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
    };

    std::string csv;
    if (reuseCsv.empty())
    {
        guarded("P1", [&] { return CheckDeterminism(LoadSweepSpecFile(specPath), csvPath, csv); });
    }
    else
    {
        std::ifstream in(reuseCsv, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        csv = ss.str();
        std::cout << "P1 SKIP  reusing " << reuseCsv << std::endl;
    }
    guarded("P2", CheckBaseline);
    guarded("P3", CheckAbsorbency);

    std::optional<SweepTable> table;
    try
    {
        table.emplace(csv);
    }
    catch (const std::exception& e)
    {
        std::cerr << "cannot read sweep CSV: " << e.what() << "\n";
    }
    auto fromTable = [&](auto check) {
        return [&, check] {
            if (!table)
            {
                throw std::runtime_error("no sweep data");
            }
            return check(*table);
        };
    };
    guarded("P4", fromTable(CheckAttackerTrend));
    guarded("P5", fromTable(CheckReceiverResilience));
    guarded("P6", fromTable(CheckSenderResilience));
    guarded("P7", fromTable(CheckMobilityDegradation));
    guarded("P8", fromTable(CheckDelayTrends));
    guarded("P9", CheckProperties);

    const auto failed = std::count_if(verdicts.begin(), verdicts.end(),
                                      [](const Verdict& v) { return !v.passed; });
    std::cout << (verdicts.size() - failed) << "/" << verdicts.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}

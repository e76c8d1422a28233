/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/sweep.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace mcast
{

namespace
{

std::string_view
Trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
    {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view>
SplitList(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true)
    {
        const auto comma = s.find(',');
        out.push_back(Trim(s.substr(0, comma)));
        if (comma == std::string_view::npos)
        {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
std::vector<T>
ParseList(std::string_view key, std::string_view value)
{
    std::vector<T> out;
    for (auto item : SplitList(value))
    {
        T v{};
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
        {
            throw ScenarioError(std::string(key), std::string(value),
                                "expected a comma-separated list of numbers");
        }
        out.push_back(v);
    }
    return out;
}

} // namespace

std::string
SweepCell::Describe() const
{
    std::ostringstream os;
    os << "senders=" << senders << " receivers=" << receivers << " attackers=" << attackers
       << " max_speed=" << FormatNumber(maxSpeed) << " replication=" << replication
       << " seed=" << seed;
    return os.str();
}

void
SweepSpec::Validate() const
{
    if (replications < 1)
    {
        throw ScenarioError("replications", std::to_string(replications), "must be >= 1");
    }
    for (const auto* axis : {&senders, &receivers, &attackers})
    {
        if (axis->empty())
        {
            throw ScenarioError("axis", "", "sweep axes must be non-empty");
        }
    }
    if (maxSpeeds.empty())
    {
        throw ScenarioError("max_speed", "", "sweep axes must be non-empty");
    }
    for (const auto& cell : ExpandSweep(*this))
    {
        if (cell.replication != 0)
        {
            continue;
        }
        try
        {
            ValidateScenario(CellScenario(*this, cell));
        }
        catch (const ScenarioError& e)
        {
            throw ScenarioError(e.Key(), e.Value(),
                                std::string("invalid grid cell (") + cell.Describe() +
                                    "): " + e.what());
        }
    }
}

SweepSpec
ParseSweepSpec(std::string_view text)
{
    SweepSpec spec;
    std::optional<std::vector<uint32_t>> senders, receivers, attackers;
    std::optional<std::vector<double>> speeds;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = Trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#')
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw ScenarioError(std::string(line), "", "not a key=value line");
        }
        const auto key = Trim(line.substr(0, eq));
        const auto value = Trim(line.substr(eq + 1));
        if (key == "senders")
        {
            senders = ParseList<uint32_t>(key, value);
        }
        else if (key == "receivers")
        {
            receivers = ParseList<uint32_t>(key, value);
        }
        else if (key == "attackers")
        {
            attackers = ParseList<uint32_t>(key, value);
        }
        else if (key == "max_speed")
        {
            speeds = ParseList<double>(key, value);
        }
        else if (key == "replications")
        {
            auto reps = ParseList<uint32_t>(key, value);
            if (reps.size() != 1)
            {
                throw ScenarioError("replications", std::string(value), "expected one integer");
            }
            spec.replications = reps.front();
        }
        else
        {
            ApplyScenarioKey(spec.base, key, value);
        }
    }
    spec.senders = senders.value_or(std::vector<uint32_t>{spec.base.senders});
    spec.receivers = receivers.value_or(std::vector<uint32_t>{spec.base.receivers});
    spec.attackers = attackers.value_or(std::vector<uint32_t>{spec.base.attack.attackerCount});
    spec.maxSpeeds = speeds.value_or(std::vector<double>{spec.base.mobility.vMax});
    spec.Validate();
    return spec;
}

SweepSpec
LoadSweepSpecFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ScenarioError("file", path, "cannot be opened");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ParseSweepSpec(ss.str());
}

std::vector<SweepCell>
ExpandSweep(const SweepSpec& spec)
{
    std::vector<SweepCell> cells;
    for (uint32_t s : spec.senders)
    {
        for (uint32_t r : spec.receivers)
        {
            for (uint32_t a : spec.attackers)
            {
                for (double v : spec.maxSpeeds)
                {
                    for (uint32_t rep = 0; rep < spec.replications; ++rep)
                    {
                        cells.push_back(SweepCell{s, r, a, v, rep, spec.base.seed + rep});
                    }
                }
            }
        }
    }
    return cells;
}

ScenarioConfig
CellScenario(const SweepSpec& spec, const SweepCell& cell)
{
    ScenarioConfig cfg = spec.base;
    cfg.senders = cell.senders;
    cfg.receivers = cell.receivers;
    cfg.attack.attackerCount = cell.attackers;
    cfg.mobility.vMax = cell.maxSpeed;
    cfg.seed = cell.seed;
    return cfg;
}

std::vector<RunResult>
RunSweep(const SweepSpec& spec, unsigned parallelism, const SweepProgress& progress)
{
    spec.Validate();
    const auto cells = ExpandSweep(spec);
    std::vector<RunResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> failed{false};
    std::mutex errorMutex;
    std::optional<std::pair<std::size_t, std::string>> firstError;

    auto worker = [&]() {
        while (!failed.load())
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size())
            {
                return;
            }
            try
            {
                results[i] = RunScenario(CellScenario(spec, cells[i]));
            }
            catch (const std::exception& e)
            {
                std::lock_guard lock(errorMutex);
                if (!firstError || i < firstError->first)
                {
                    firstError = {i, e.what()};
                }
                failed = true;
                return;
            }
            const std::size_t d = ++done;
            if (progress)
            {
                std::lock_guard lock(errorMutex);
                progress(d, cells.size());
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, cells.size()));
    if (threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
        {
            pool.emplace_back(worker);
        }
        for (auto& th : pool)
        {
            th.join();
        }
    }
    if (firstError)
    {
        throw SweepError("sweep cell " + std::to_string(firstError->first) + " (" +
                         cells[firstError->first].Describe() + ") failed: " + firstError->second);
    }
    return results;
}

std::string
CsvHeader()
{
    return "run_id,seed,node_count,senders,receivers,attackers,attack_mode,max_speed_mps,"
           "duration_s,generated,expected_deliveries,delivered,pdr,avg_delay_ms,"
           "dropped_by_attackers,control_overhead";
}

std::string
CsvRow(std::size_t runId, const RunResult& r)
{
    char pdr[32];
    std::snprintf(pdr, sizeof(pdr), "%.6f", r.pdr);
    std::string delay = "NA";
    if (r.avgDelayMs)
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", *r.avgDelayMs);
        delay = buf;
    }
    std::ostringstream os;
    os << runId << ',' << r.echo.seed << ',' << r.echo.nodeCount << ',' << r.echo.senders << ','
       << r.echo.receivers << ',' << r.echo.attackers << ',' << r.echo.attackMode << ','
       << FormatNumber(r.echo.maxSpeed) << ',' << FormatNumber(r.echo.duration) << ','
       << r.generated << ',' << r.expectedDeliveries << ',' << r.delivered << ',' << pdr << ','
       << delay << ',' << r.droppedByAttackers << ',' << r.controlOverhead;
    return os.str();
}

std::string
ToCsv(const std::vector<RunResult>& results)
{
    std::string out = CsvHeader() + "\n";
    for (std::size_t i = 0; i < results.size(); ++i)
    {
        out += CsvRow(i, results[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::map<std::string, std::string>>
ParseCsv(std::string_view text)
{
    std::vector<std::map<std::string, std::string>> rows;
    std::vector<std::string> header;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = Trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty())
        {
            continue;
        }
        const auto fields = SplitList(line);
        if (header.empty())
        {
            header.assign(fields.begin(), fields.end());
            continue;
        }
        if (fields.size() != header.size())
        {
            throw std::runtime_error("CSV row has " + std::to_string(fields.size()) +
                                     " fields, header has " + std::to_string(header.size()));
        }
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            row[header[i]] = std::string(fields[i]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mcast

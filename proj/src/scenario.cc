/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/scenario.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace mcast
{

namespace
{

constexpr GroupId kScenarioGroup = 1;

std::string_view
Trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double
ParseReal(std::string_view key, std::string_view value)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
    {
        throw ScenarioError(std::string(key), std::string(value), "expected a finite number");
    }
    return v;
}

uint64_t
ParseUnsigned(std::string_view key, std::string_view value)
{
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    {
        throw ScenarioError(std::string(key), std::string(value),
                            "expected a non-negative integer");
    }
    return v;
}

uint32_t
ParseU32(std::string_view key, std::string_view value)
{
    const uint64_t v = ParseUnsigned(key, value);
    if (v > UINT32_MAX)
    {
        throw ScenarioError(std::string(key), std::string(value), "value out of range");
    }
    return static_cast<uint32_t>(v);
}

bool
ParseBool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes")
    {
        return true;
    }
    if (value == "false" || value == "0" || value == "no")
    {
        return false;
    }
    throw ScenarioError(std::string(key), std::string(value), "expected true or false");
}

void
Require(bool ok, const char* key, double value, const char* constraint)
{
    if (!ok)
    {
        throw ScenarioError(key, FormatNumber(value), constraint);
    }
}

} // namespace

ScenarioError::ScenarioError(std::string key, std::string value, const std::string& constraint)
    : std::runtime_error("scenario key '" + key + "' = '" + value + "': " + constraint),
      m_key(std::move(key)),
      m_value(std::move(value))
{
}

std::string
FormatNumber(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void
ApplyScenarioKey(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    using Setter = std::function<void(ScenarioConfig&, std::string_view)>;
    static const std::vector<std::pair<std::string_view, Setter>> kSetters = {
        {"node_count", [](auto& c, auto v) { c.nodeCount = ParseU32("node_count", v); }},
        {"area_w", [](auto& c, auto v) { c.mobility.areaWidth = ParseReal("area_w", v); }},
        {"area_h", [](auto& c, auto v) { c.mobility.areaHeight = ParseReal("area_h", v); }},
        {"v_min", [](auto& c, auto v) { c.mobility.vMin = ParseReal("v_min", v); }},
        {"v_max", [](auto& c, auto v) { c.mobility.vMax = ParseReal("v_max", v); }},
        {"pause", [](auto& c, auto v) { c.mobility.pause = ParseReal("pause", v); }},
        {"range", [](auto& c, auto v) { c.radio.range = ParseReal("range", v); }},
        {"per_hop_latency_ms",
         [](auto& c, auto v) { c.radio.perHopLatency = ParseReal("per_hop_latency_ms", v) / 1000.0; }},
        {"jitter_ms", [](auto& c, auto v) { c.radio.jitter = ParseReal("jitter_ms", v) / 1000.0; }},
        {"loss_prob", [](auto& c, auto v) { c.radio.lossProb = ParseReal("loss_prob", v); }},
        {"jreq_refresh_s",
         [](auto& c, auto v) { c.protocol.jreqRefresh = ParseReal("jreq_refresh_s", v); }},
        {"fg_lifetime_s",
         [](auto& c, auto v) { c.protocol.fgLifetime = ParseReal("fg_lifetime_s", v); }},
        {"member_lifetime_s",
         [](auto& c, auto v) { c.protocol.memberLifetime = ParseReal("member_lifetime_s", v); }},
        {"legit_reply_delay_ms",
         [](auto& c, auto v) {
             c.protocol.legitReplyDelay = ParseReal("legit_reply_delay_ms", v) / 1000.0;
         }},
        {"attackers", [](auto& c, auto v) { c.attack.attackerCount = ParseU32("attackers", v); }},
        {"attack_mode",
         [](auto& c, auto v) {
             auto mode = ParseDropMode(v);
             if (!mode)
             {
                 throw ScenarioError("attack_mode", std::string(v),
                                     "expected one of bulk, every_n, every_t, random_p, "
                                     "per_destination");
             }
             c.attack.mode = *mode;
         }},
        {"attack_n", [](auto& c, auto v) { c.attack.everyN = ParseU32("attack_n", v); }},
        {"attack_t_s", [](auto& c, auto v) { c.attack.everyT = ParseReal("attack_t_s", v); }},
        {"attack_p", [](auto& c, auto v) { c.attack.probability = ParseReal("attack_p", v); }},
        {"attack_target",
         [](auto& c, auto v) {
             auto target = DropTarget::Parse(v);
             if (!target)
             {
                 throw ScenarioError("attack_target", std::string(v),
                                     "expected N, group:N or source:N");
             }
             c.attack.target = *target;
         }},
        {"forge_replies",
         [](auto& c, auto v) { c.attack.forgeReplies = ParseBool("forge_replies", v); }},
        {"senders", [](auto& c, auto v) { c.senders = ParseU32("senders", v); }},
        {"receivers", [](auto& c, auto v) { c.receivers = ParseU32("receivers", v); }},
        {"data_rate", [](auto& c, auto v) { c.dataRate = ParseReal("data_rate", v); }},
        {"packet_size", [](auto& c, auto v) { c.packetSize = ParseU32("packet_size", v); }},
        {"duration_s", [](auto& c, auto v) { c.duration = ParseReal("duration_s", v); }},
        {"warmup_s", [](auto& c, auto v) { c.warmup = ParseReal("warmup_s", v); }},
        {"seed", [](auto& c, auto v) { c.seed = ParseUnsigned("seed", v); }},
    };
    for (const auto& [name, setter] : kSetters)
    {
        if (name == key)
        {
            setter(cfg, Trim(value));
            return;
        }
    }
    throw ScenarioError(std::string(key), std::string(value), "unknown key");
}

ScenarioConfig
ParseScenario(std::string_view text)
{
    ScenarioConfig cfg;
    std::size_t lineNo = 0;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = Trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineNo;
        if (line.empty() || line.front() == '#')
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw ScenarioError(std::string(line), "",
                                "line " + std::to_string(lineNo) + " is not key=value");
        }
        ApplyScenarioKey(cfg, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    }
    ValidateScenario(cfg);
    return cfg;
}

ScenarioConfig
LoadScenarioFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ScenarioError("file", path, "cannot be opened");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ParseScenario(ss.str());
}

std::string
SerializeScenario(const ScenarioConfig& c)
{
    std::ostringstream os;
    os << "node_count=" << c.nodeCount << '\n';
    os << "area_w=" << FormatNumber(c.mobility.areaWidth) << '\n';
    os << "area_h=" << FormatNumber(c.mobility.areaHeight) << '\n';
    os << "v_min=" << FormatNumber(c.mobility.vMin) << '\n';
    os << "v_max=" << FormatNumber(c.mobility.vMax) << '\n';
    os << "pause=" << FormatNumber(c.mobility.pause) << '\n';
    os << "range=" << FormatNumber(c.radio.range) << '\n';
    os << "per_hop_latency_ms=" << FormatNumber(c.radio.perHopLatency * 1000.0) << '\n';
    os << "jitter_ms=" << FormatNumber(c.radio.jitter * 1000.0) << '\n';
    os << "loss_prob=" << FormatNumber(c.radio.lossProb) << '\n';
    os << "jreq_refresh_s=" << FormatNumber(c.protocol.jreqRefresh) << '\n';
    os << "fg_lifetime_s=" << FormatNumber(c.protocol.fgLifetime) << '\n';
    os << "member_lifetime_s=" << FormatNumber(c.protocol.memberLifetime) << '\n';
    os << "legit_reply_delay_ms=" << FormatNumber(c.protocol.legitReplyDelay * 1000.0) << '\n';
    os << "attackers=" << c.attack.attackerCount << '\n';
    os << "attack_mode=" << ToString(c.attack.mode) << '\n';
    os << "attack_n=" << c.attack.everyN << '\n';
    os << "attack_t_s=" << FormatNumber(c.attack.everyT) << '\n';
    os << "attack_p=" << FormatNumber(c.attack.probability) << '\n';
    os << "attack_target=" << c.attack.target.ToString() << '\n';
    os << "forge_replies=" << (c.attack.forgeReplies ? "true" : "false") << '\n';
    os << "senders=" << c.senders << '\n';
    os << "receivers=" << c.receivers << '\n';
    os << "data_rate=" << FormatNumber(c.dataRate) << '\n';
    os << "packet_size=" << c.packetSize << '\n';
    os << "duration_s=" << FormatNumber(c.duration) << '\n';
    os << "warmup_s=" << FormatNumber(c.warmup) << '\n';
    os << "seed=" << c.seed << '\n';
    return os.str();
}

void
ValidateScenario(const ScenarioConfig& c)
{
    Require(c.nodeCount >= 1, "node_count", c.nodeCount, "must be >= 1");
    Require(c.mobility.areaWidth > 0, "area_w", c.mobility.areaWidth, "must be > 0");
    Require(c.mobility.areaHeight > 0, "area_h", c.mobility.areaHeight, "must be > 0");
    Require(c.mobility.vMin >= 0, "v_min", c.mobility.vMin, "must be >= 0");
    Require(c.mobility.vMax >= c.mobility.vMin, "v_max", c.mobility.vMax, "must be >= v_min");
    Require(c.mobility.pause >= 0, "pause", c.mobility.pause, "must be >= 0");
    Require(c.radio.range > 0, "range", c.radio.range, "must be > 0");
    Require(c.radio.perHopLatency > 0, "per_hop_latency_ms", c.radio.perHopLatency * 1000.0,
            "must be > 0");
    Require(c.radio.jitter >= 0, "jitter_ms", c.radio.jitter * 1000.0, "must be >= 0");
    Require(c.radio.lossProb >= 0 && c.radio.lossProb <= 1, "loss_prob", c.radio.lossProb,
            "must lie in [0, 1]");
    Require(c.protocol.jreqRefresh > 0, "jreq_refresh_s", c.protocol.jreqRefresh, "must be > 0");
    Require(c.protocol.fgLifetime > c.protocol.jreqRefresh, "fg_lifetime_s",
            c.protocol.fgLifetime, "must exceed jreq_refresh_s");
    Require(c.protocol.memberLifetime > 0, "member_lifetime_s", c.protocol.memberLifetime,
            "must be > 0");
    Require(c.protocol.legitReplyDelay >= 0, "legit_reply_delay_ms",
            c.protocol.legitReplyDelay * 1000.0, "must be >= 0");
    Require(c.attack.everyN >= 1, "attack_n", c.attack.everyN, "must be >= 1");
    Require(c.attack.everyT > 0, "attack_t_s", c.attack.everyT, "must be > 0");
    Require(c.attack.probability >= 0 && c.attack.probability <= 1, "attack_p",
            c.attack.probability, "must lie in [0, 1]");
    Require(c.dataRate > 0, "data_rate", c.dataRate, "must be > 0");
    Require(c.packetSize > 0, "packet_size", c.packetSize, "must be > 0");
    Require(c.duration > 0, "duration_s", c.duration, "must be > 0");
    Require(c.warmup >= 0, "warmup_s", c.warmup, "must be >= 0");
    const uint64_t roles =
        uint64_t{c.senders} + uint64_t{c.receivers} + uint64_t{c.attack.attackerCount};
    if (roles > c.nodeCount)
    {
        const std::string which = c.senders > c.nodeCount     ? "senders"
                                  : c.receivers > c.nodeCount ? "receivers"
                                                              : "attackers";
        const uint32_t value = which == "senders"     ? c.senders
                               : which == "receivers" ? c.receivers
                                                      : c.attack.attackerCount;
        throw ScenarioError(which, std::to_string(value),
                            "senders + receivers + attackers (" + std::to_string(roles) +
                                ") must not exceed node_count (" + std::to_string(c.nodeCount) +
                                ")");
    }
}

ScenarioLayout
BuildLayout(const ScenarioConfig& cfg)
{
    ScenarioLayout layout;
    auto placement = RandomSource::Derive(cfg.seed, RandomStream::Placement);
    layout.positions = PlaceUniformly(cfg.nodeCount, cfg.mobility, placement);

    auto roles = RandomSource::Derive(cfg.seed, RandomStream::Roles);
    const auto order = roles.Permutation(cfg.nodeCount);
    layout.sources.assign(order.begin(), order.begin() + cfg.senders);
    layout.receivers.assign(order.begin() + cfg.senders,
                            order.begin() + cfg.senders + cfg.receivers);

    std::vector<NodeId> members = layout.sources;
    members.insert(members.end(), layout.receivers.begin(), layout.receivers.end());
    auto selection = RandomSource::Derive(cfg.seed, RandomStream::AttackerSelection);
    layout.attackers = SelectAttackers(cfg.nodeCount, members, cfg.attack.attackerCount, selection);
    return layout;
}

NetworkSetup
BuildSetup(const ScenarioConfig& cfg, const ScenarioLayout& layout)
{
    NetworkSetup setup;
    setup.positions = layout.positions;
    setup.mobility = cfg.mobility;
    setup.radio = cfg.radio;
    setup.protocol = cfg.protocol;
    setup.attack = cfg.attack;
    setup.traffic.rate = cfg.dataRate;
    setup.traffic.packetSize = cfg.packetSize;
    setup.traffic.stopAt = Seconds(std::max(0.0, cfg.duration - kDrainSeconds));
    setup.traffic.warmup = Seconds(cfg.warmup);
    setup.sources = layout.sources;
    setup.receivers = layout.receivers;
    setup.attackers = layout.attackers;
    setup.group = kScenarioGroup;
    setup.seed = cfg.seed;
    return setup;
}

ScenarioEcho
EchoOf(const ScenarioConfig& cfg)
{
    ScenarioEcho e;
    e.seed = cfg.seed;
    e.nodeCount = cfg.nodeCount;
    e.senders = cfg.senders;
    e.receivers = cfg.receivers;
    e.attackers = cfg.attack.attackerCount;
    e.attackMode = std::string(ToString(cfg.attack.mode));
    e.maxSpeed = cfg.mobility.vMax;
    e.duration = cfg.duration;
    return e;
}

RunResult
RunScenario(const ScenarioConfig& cfg, TraceSink* trace)
{
    ValidateScenario(cfg);
    const ScenarioLayout layout = BuildLayout(cfg);
    Network net(BuildSetup(cfg, layout), trace);
    net.Start();
    net.Sim().Schedule(Seconds(cfg.duration), EventKind::SimEnd, 0);
    net.RunUntil(Seconds(cfg.duration));
    return net.Finish(EchoOf(cfg));
}

} // namespace mcast

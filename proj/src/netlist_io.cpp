#include "memsim/netlist_io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "memsim/csv.hpp"

namespace memsim {

namespace {

double parse_num(const std::string& tok, const std::string& context) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw std::invalid_argument("netlist parse: bad number '" + tok + "' in " + context);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string dump_netlist(const NeuronNetlist& netlist) {
    netlist.validate();
    std::string out;
    out += "netlist mode=";
    out += netlist.mode == LoopMode::open_loop ? "open_loop" : "closed_loop";
    out += " oneshot_sense=";
    out += netlist.oneshot_sense == OneShotSense::integrator_output ? "integrator_output"
                                                                    : "memristor_node";
    out += "\n";

    std::vector<const BlockSpec*> nodes;
    for (const auto& n : netlist.nodes) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const BlockSpec* a, const BlockSpec* b) { return a->id < b->id; });
    for (const BlockSpec* n : nodes) {
        out += "node " + n->id + " " + block_kind_name(n->kind);
        for (const auto& [key, value] : n->params)
            out += " " + key + "=" + format_double(value);
        out += "\n";
    }
    for (const auto& [id, train] : netlist.trains) { // std::map: already sorted
        out += "train " + id + " pulse_width=" + format_double(train.pulse_width) +
               " amplitude=" + format_double(train.amplitude) + " times=";
        for (std::size_t i = 0; i < train.spike_times.size(); ++i) {
            if (i) out += ";";
            out += format_double(train.spike_times[i]);
        }
        out += "\n";
    }
    std::vector<const Edge*> edges;
    for (const auto& e : netlist.edges) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) {
        return std::tie(a->src, a->dst, a->port) < std::tie(b->src, b->dst, b->port);
    });
    for (const Edge* e : edges)
        out += "edge " + e->src + " -> " + e->dst + " port=" + e->port +
               " delay=" + (e->delayed ? std::string("1") : std::string("0")) + "\n";
    return out;
}

NeuronNetlist parse_netlist(const std::string& text) {
    NeuronNetlist nl;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        auto bad = [&](const std::string& msg) -> std::invalid_argument {
            return std::invalid_argument("netlist parse line " + std::to_string(line_no) +
                                         ": " + msg);
        };
        auto kv = [&](const std::string& tok, const char* key) {
            const std::string prefix = std::string(key) + "=";
            if (tok.rfind(prefix, 0) != 0) throw bad("expected '" + prefix + "...'");
            return tok.substr(prefix.size());
        };
        if (tag == "netlist") {
            std::string mode_tok, sense_tok;
            ls >> mode_tok >> sense_tok;
            const std::string mode = kv(mode_tok, "mode");
            if (mode == "open_loop")
                nl.mode = LoopMode::open_loop;
            else if (mode == "closed_loop")
                nl.mode = LoopMode::closed_loop;
            else
                throw bad("unknown mode '" + mode + "'");
            const std::string sense = kv(sense_tok, "oneshot_sense");
            if (sense == "integrator_output")
                nl.oneshot_sense = OneShotSense::integrator_output;
            else if (sense == "memristor_node")
                nl.oneshot_sense = OneShotSense::memristor_node;
            else
                throw bad("unknown oneshot_sense '" + sense + "'");
            saw_header = true;
        } else if (tag == "node") {
            BlockSpec spec;
            std::string kind;
            ls >> spec.id >> kind;
            if (spec.id.empty() || kind.empty()) throw bad("malformed node line");
            spec.kind = block_kind_from_name(kind);
            std::string tok;
            while (ls >> tok) {
                const std::size_t eq = tok.find('=');
                if (eq == std::string::npos) throw bad("malformed parameter '" + tok + "'");
                spec.params[tok.substr(0, eq)] =
                    parse_num(tok.substr(eq + 1), "node " + spec.id);
            }
            nl.nodes.push_back(std::move(spec));
        } else if (tag == "train") {
            std::string id, w_tok, a_tok, t_tok;
            ls >> id >> w_tok >> a_tok >> t_tok;
            SpikeTrain train;
            train.pulse_width = parse_num(kv(w_tok, "pulse_width"), "train " + id);
            train.amplitude = parse_num(kv(a_tok, "amplitude"), "train " + id);
            const std::string times = kv(t_tok, "times");
            if (!times.empty())
                for (const auto& t : split(times, ';'))
                    train.spike_times.push_back(parse_num(t, "train " + id));
            nl.trains[id] = std::move(train);
        } else if (tag == "edge") {
            Edge e;
            std::string arrow, port_tok, delay_tok;
            ls >> e.src >> arrow >> e.dst >> port_tok >> delay_tok;
            if (arrow != "->") throw bad("expected '->'");
            e.port = kv(port_tok, "port");
            const std::string d = kv(delay_tok, "delay");
            if (d == "1")
                e.delayed = true;
            else if (d == "0")
                e.delayed = false;
            else
                throw bad("delay must be 0 or 1");
            nl.edges.push_back(std::move(e));
        } else {
            throw bad("unknown record '" + tag + "'");
        }
    }
    if (!saw_header) throw std::invalid_argument("netlist parse: missing header line");
    nl.validate();
    return nl;
}

} // namespace memsim

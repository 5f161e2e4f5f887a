#include "amsplace/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "amsplace/detail/format.hpp"

namespace amsplace {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(std::string msg) { throw ParseError(std::move(msg)); }

const json& field(const json& obj, const char* key, const char* where) {
    if (!obj.is_object()) fail(detail::fmt("%s: expected an object", where));
    auto it = obj.find(key);
    if (it == obj.end()) fail(detail::fmt("%s: missing field '%s'", where, key));
    return *it;
}

const json* opt_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::int64_t as_int(const json& v, const char* where) {
    if (!v.is_number_integer())
        fail(detail::fmt("%s: expected an integer", where));
    return v.get<std::int64_t>();
}

double as_double(const json& v, const char* where) {
    if (!v.is_number()) fail(detail::fmt("%s: expected a number", where));
    return v.get<double>();
}

std::string as_string(const json& v, const char* where) {
    if (!v.is_string()) fail(detail::fmt("%s: expected a string", where));
    return v.get<std::string>();
}

const json& as_array(const json& v, const char* where) {
    if (!v.is_array()) fail(detail::fmt("%s: expected an array", where));
    return v;
}

std::vector<int> as_index_list(const json& v, const char* where) {
    std::vector<int> out;
    for (const json& e : as_array(v, where))
        out.push_back(static_cast<int>(as_int(e, where)));
    return out;
}

void check_header(const json& doc, const char* fmt_name, const char* where) {
    if (as_string(field(doc, "format", where), where) != fmt_name)
        fail(detail::fmt("%s: not a %s document", where, fmt_name));
    if (as_int(field(doc, "version", where), where) != 1)
        fail(detail::fmt("%s: unsupported version", where));
}

const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Bottom: return "bottom";
        case Side::Top: return "top";
    }
    return "left";
}

Side side_from(const std::string& s, const char* where) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "bottom") return Side::Bottom;
    if (s == "top") return Side::Top;
    fail(detail::fmt("%s: unknown side '%s'", where, s.c_str()));
}

json parse_json(const std::string& text, const char* where) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(detail::fmt("%s: %s", where, e.what()));
    }
}

}  // namespace

std::string write_instance(const Instance& inst) {
    json doc;
    doc["format"] = "amsplace-instance";
    doc["version"] = 1;

    json rects = json::array();
    for (const Rect& r : inst.rects) {
        json jr;
        jr["name"] = r.name;
        json vs = json::array();
        for (const Variant& v : r.variants) vs.push_back(json::array({v.w, v.h}));
        jr["variants"] = std::move(vs);
        rects.push_back(std::move(jr));
    }
    doc["rects"] = std::move(rects);

    json dist;
    dist["default"] = inst.distances.default_distance;
    if (!inst.distances.overrides.empty()) {
        std::vector<std::tuple<int, int, coord_t>> ov;
        for (const auto& [key, a] : inst.distances.overrides)
            ov.emplace_back(static_cast<int>(key >> 32),
                            static_cast<int>(key & 0xffffffffu), a);
        std::sort(ov.begin(), ov.end());
        json jov = json::array();
        for (const auto& [i, j, a] : ov) jov.push_back(json::array({i, j, a}));
        dist["overrides"] = std::move(jov);
    }
    doc["distances"] = std::move(dist);

    json nets = json::array();
    for (const Net& net : inst.nets) {
        json jn;
        jn["members"] = net.members;
        jn["cost"] = net.cost;
        if (!net.anchors.empty()) {
            json ja = json::array();
            for (const IntPoint& p : net.anchors) ja.push_back(json::array({p.x, p.y}));
            jn["anchors"] = std::move(ja);
        }
        nets.push_back(std::move(jn));
    }
    doc["nets"] = std::move(nets);

    if (!inst.groups.empty()) {
        json groups = json::array();
        for (const SymmetryGroup& g : inst.groups) {
            json jg;
            jg["axis"] = g.axis == Axis::Vertical ? "v" : "h";
            json pairs = json::array();
            for (const auto& [a, b] : g.pairs) pairs.push_back(json::array({a, b}));
            jg["pairs"] = std::move(pairs);
            jg["selfs"] = g.selfs;
            groups.push_back(std::move(jg));
        }
        doc["groups"] = std::move(groups);
    }

    if (!inst.blockages.empty()) {
        json blockages = json::array();
        for (const Blockage& b : inst.blockages) {
            json jb;
            jb["x"] = b.box.x;
            jb["y"] = b.box.y;
            jb["w"] = b.box.w;
            jb["h"] = b.box.h;
            jb["restricted"] = b.restricted;
            blockages.push_back(std::move(jb));
        }
        doc["blockages"] = std::move(blockages);
    }

    if (!inst.proximities.empty()) {
        json prox = json::array();
        for (const ProximityPair& pp : inst.proximities) {
            json jp;
            jp["a"] = pp.a;
            jp["b"] = pp.b;
            jp["cost"] = pp.cost;
            prox.push_back(std::move(jp));
        }
        doc["proximities"] = std::move(prox);
    }

    if (!inst.interfaces.empty()) {
        json ifs = json::array();
        for (const InterfaceEntry& ie : inst.interfaces) {
            json je;
            je["side"] = side_name(ie.side);
            je["members"] = ie.members;
            je["cost"] = ie.cost;
            ifs.push_back(std::move(je));
        }
        doc["interfaces"] = std::move(ifs);
    }

    doc["aspect"] = json::array({inst.aspect_lo, inst.aspect_hi});
    json w;
    w["c_area"] = inst.weights.c_area;
    w["c_conn"] = inst.weights.c_conn;
    w["c_prox"] = inst.weights.c_prox;
    w["c_inter"] = inst.weights.c_inter;
    doc["weights"] = std::move(w);

    return doc.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
    json doc = parse_json(text, "instance");
    check_header(doc, "amsplace-instance", "instance");

    Instance inst;
    const json& jrects = as_array(field(doc, "rects", "instance"), "instance.rects");
    for (size_t i = 0; i < jrects.size(); ++i) {
        const std::string where = detail::fmt("instance.rects[%zu]", i);
        Rect r;
        r.name = as_string(field(jrects[i], "name", where.c_str()), where.c_str());
        const json& vs =
            as_array(field(jrects[i], "variants", where.c_str()), where.c_str());
        for (const json& v : vs) {
            const json& pair = as_array(v, where.c_str());
            if (pair.size() != 2)
                fail(detail::fmt("%s: variant must be [w,h]", where.c_str()));
            r.variants.push_back(Variant{as_int(pair[0], where.c_str()),
                                         as_int(pair[1], where.c_str())});
        }
        inst.rects.push_back(std::move(r));
    }

    if (const json* jd = opt_field(doc, "distances")) {
        inst.distances.default_distance =
            as_int(field(*jd, "default", "instance.distances"), "instance.distances");
        if (const json* jov = opt_field(*jd, "overrides")) {
            const json& arr = as_array(*jov, "instance.distances.overrides");
            for (size_t k = 0; k < arr.size(); ++k) {
                const std::string where =
                    detail::fmt("instance.distances.overrides[%zu]", k);
                const json& e = as_array(arr[k], where.c_str());
                if (e.size() != 3)
                    fail(detail::fmt("%s: expected [i,j,a]", where.c_str()));
                int i = static_cast<int>(as_int(e[0], where.c_str()));
                int j = static_cast<int>(as_int(e[1], where.c_str()));
                if (i < 0 || i >= j)
                    fail(detail::fmt("%s: requires 0 <= i < j", where.c_str()));
                inst.distances.set(i, j, as_int(e[2], where.c_str()));
            }
        }
    }

    if (const json* jn = opt_field(doc, "nets")) {
        const json& arr = as_array(*jn, "instance.nets");
        for (size_t k = 0; k < arr.size(); ++k) {
            const std::string where = detail::fmt("instance.nets[%zu]", k);
            Net net;
            net.members =
                as_index_list(field(arr[k], "members", where.c_str()), where.c_str());
            if (const json* jc = opt_field(arr[k], "cost"))
                net.cost = as_double(*jc, where.c_str());
            if (const json* ja = opt_field(arr[k], "anchors"))
                for (const json& p : as_array(*ja, where.c_str())) {
                    const json& pt = as_array(p, where.c_str());
                    if (pt.size() != 2)
                        fail(detail::fmt("%s: anchor must be [x,y]", where.c_str()));
                    net.anchors.push_back(IntPoint{as_int(pt[0], where.c_str()),
                                                   as_int(pt[1], where.c_str())});
                }
            inst.nets.push_back(std::move(net));
        }
    }

    if (const json* jg = opt_field(doc, "groups")) {
        const json& arr = as_array(*jg, "instance.groups");
        for (size_t k = 0; k < arr.size(); ++k) {
            const std::string where = detail::fmt("instance.groups[%zu]", k);
            SymmetryGroup g;
            std::string axis =
                as_string(field(arr[k], "axis", where.c_str()), where.c_str());
            if (axis == "v")
                g.axis = Axis::Vertical;
            else if (axis == "h")
                g.axis = Axis::Horizontal;
            else
                fail(detail::fmt("%s: axis must be 'v' or 'h'", where.c_str()));
            for (const json& p :
                 as_array(field(arr[k], "pairs", where.c_str()), where.c_str())) {
                const json& pr = as_array(p, where.c_str());
                if (pr.size() != 2)
                    fail(detail::fmt("%s: pair must be [i,j]", where.c_str()));
                g.pairs.emplace_back(static_cast<int>(as_int(pr[0], where.c_str())),
                                     static_cast<int>(as_int(pr[1], where.c_str())));
            }
            g.selfs =
                as_index_list(field(arr[k], "selfs", where.c_str()), where.c_str());
            inst.groups.push_back(std::move(g));
        }
    }

    if (const json* jb = opt_field(doc, "blockages")) {
        const json& arr = as_array(*jb, "instance.blockages");
        for (size_t k = 0; k < arr.size(); ++k) {
            const std::string where = detail::fmt("instance.blockages[%zu]", k);
            Blockage b;
            b.box.x = as_int(field(arr[k], "x", where.c_str()), where.c_str());
            b.box.y = as_int(field(arr[k], "y", where.c_str()), where.c_str());
            b.box.w = as_int(field(arr[k], "w", where.c_str()), where.c_str());
            b.box.h = as_int(field(arr[k], "h", where.c_str()), where.c_str());
            b.restricted = as_index_list(field(arr[k], "restricted", where.c_str()),
                                         where.c_str());
            inst.blockages.push_back(std::move(b));
        }
    }

    if (const json* jp = opt_field(doc, "proximities")) {
        const json& arr = as_array(*jp, "instance.proximities");
        for (size_t k = 0; k < arr.size(); ++k) {
            const std::string where = detail::fmt("instance.proximities[%zu]", k);
            ProximityPair pp;
            pp.a = static_cast<int>(
                as_int(field(arr[k], "a", where.c_str()), where.c_str()));
            pp.b = static_cast<int>(
                as_int(field(arr[k], "b", where.c_str()), where.c_str()));
            pp.cost = as_double(field(arr[k], "cost", where.c_str()), where.c_str());
            inst.proximities.push_back(pp);
        }
    }

    if (const json* ji = opt_field(doc, "interfaces")) {
        const json& arr = as_array(*ji, "instance.interfaces");
        for (size_t k = 0; k < arr.size(); ++k) {
            const std::string where = detail::fmt("instance.interfaces[%zu]", k);
            InterfaceEntry ie;
            ie.side = side_from(
                as_string(field(arr[k], "side", where.c_str()), where.c_str()),
                where.c_str());
            ie.members =
                as_index_list(field(arr[k], "members", where.c_str()), where.c_str());
            ie.cost = as_double(field(arr[k], "cost", where.c_str()), where.c_str());
            inst.interfaces.push_back(std::move(ie));
        }
    }

    if (const json* ja = opt_field(doc, "aspect")) {
        const json& arr = as_array(*ja, "instance.aspect");
        if (arr.size() != 2) fail("instance.aspect: expected [lo, hi]");
        inst.aspect_lo = as_double(arr[0], "instance.aspect");
        inst.aspect_hi = as_double(arr[1], "instance.aspect");
    }

    if (const json* jw = opt_field(doc, "weights")) {
        inst.weights.c_area =
            as_double(field(*jw, "c_area", "instance.weights"), "instance.weights");
        inst.weights.c_conn =
            as_double(field(*jw, "c_conn", "instance.weights"), "instance.weights");
        inst.weights.c_prox =
            as_double(field(*jw, "c_prox", "instance.weights"), "instance.weights");
        inst.weights.c_inter =
            as_double(field(*jw, "c_inter", "instance.weights"), "instance.weights");
    }

    auto errs = validate_instance(inst);
    if (!errs.empty())
        fail(detail::fmt("instance: %s%s", errs.front().c_str(),
                         errs.size() > 1
                             ? detail::fmt(" (+%zu more)", errs.size() - 1).c_str()
                             : ""));
    return inst;
}

std::string write_placement(const Placement& p, const Instance& inst,
                            const CriterionReport& report, const SolveMeta* meta) {
    json doc;
    doc["format"] = "amsplace-placement";
    doc["version"] = 1;

    json rects = json::array();
    for (int i = 0; i < inst.n(); ++i) {
        json jr;
        jr["name"] = inst.rects[i].name;
        jr["x"] = p.pos[i].x;
        jr["y"] = p.pos[i].y;
        jr["variant"] = p.variant[i];
        rects.push_back(std::move(jr));
    }
    doc["rects"] = std::move(rects);
    doc["axes2"] = p.axes2;

    json jr;
    jr["area_term"] = report.area_term;
    jr["conn_raw"] = report.conn_raw;
    jr["prox_raw"] = report.prox_raw;
    jr["inter_raw"] = report.inter_raw;
    jr["s_conn"] = report.s_conn;
    jr["s_prox"] = report.s_prox;
    jr["s_inter"] = report.s_inter;
    jr["penalty_applied"] = report.penalty_applied;
    jr["total"] = report.total;
    doc["report"] = std::move(jr);

    if (meta) {
        json jm;
        jm["algorithm"] = meta->algorithm;
        jm["seed"] = meta->seed;
        jm["wall_time_s"] = meta->wall_time_s;
        doc["meta"] = std::move(jm);
    }
    return doc.dump(2) + "\n";
}

Placement parse_placement(const std::string& text, const Instance& inst) {
    json doc = parse_json(text, "placement");
    check_header(doc, "amsplace-placement", "placement");

    std::unordered_map<std::string, int> index;
    for (int i = 0; i < inst.n(); ++i) index[inst.rects[i].name] = i;

    Placement p;
    p.pos.resize(inst.n());
    p.variant.assign(inst.n(), -1);

    const json& jrects = as_array(field(doc, "rects", "placement"), "placement.rects");
    if (static_cast<int>(jrects.size()) != inst.n())
        fail(detail::fmt("placement: %zu rects, instance has %d", jrects.size(),
                         inst.n()));
    for (size_t k = 0; k < jrects.size(); ++k) {
        const std::string where = detail::fmt("placement.rects[%zu]", k);
        std::string name =
            as_string(field(jrects[k], "name", where.c_str()), where.c_str());
        auto it = index.find(name);
        if (it == index.end())
            fail(detail::fmt("%s: unknown rect '%s'", where.c_str(), name.c_str()));
        int i = it->second;
        if (p.variant[i] >= 0)
            fail(detail::fmt("%s: rect '%s' listed twice", where.c_str(),
                             name.c_str()));
        p.pos[i].x = as_int(field(jrects[k], "x", where.c_str()), where.c_str());
        p.pos[i].y = as_int(field(jrects[k], "y", where.c_str()), where.c_str());
        auto v = as_int(field(jrects[k], "variant", where.c_str()), where.c_str());
        if (v < 0 || v >= static_cast<std::int64_t>(inst.rects[i].variants.size()))
            fail(detail::fmt("%s: variant %lld out of range", where.c_str(),
                             static_cast<long long>(v)));
        p.variant[i] = static_cast<std::int32_t>(v);
    }

    if (const json* ja = opt_field(doc, "axes2"))
        for (const json& v : as_array(*ja, "placement.axes2"))
            p.axes2.push_back(as_int(v, "placement.axes2"));
    if (p.axes2.size() != inst.groups.size())
        fail(detail::fmt("placement: %zu axes for %zu groups", p.axes2.size(),
                         inst.groups.size()));
    return p;
}

// ---- GSRC ------------------------------------------------------------------

namespace {

// Splits into lines, trimming '\r' and '#'-comments; blank lines dropped.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                                 line.back() == '\t'))
            line.pop_back();
        size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        out.emplace_back(no, line.substr(b));
    }
    return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

bool is_header_line(const std::vector<std::string>& t) {
    if (t.empty()) return true;
    // "UCSC blocks 1.0", "UCLA nets 1.0", "NumNets : 118", ...
    if (t[0] == "UCSC" || t[0] == "UCLA") return true;
    return t.size() >= 3 && t[0].rfind("Num", 0) == 0 && t[1] == ":";
}

std::vector<coord_t> extract_ints(const std::string& s, const char* where) {
    std::string cleaned = s;
    for (char& c : cleaned)
        if (c == '(' || c == ')' || c == ',') c = ' ';
    std::istringstream in(cleaned);
    std::vector<coord_t> out;
    coord_t v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) fail(detail::fmt("%s: malformed coordinate list", where));
    return out;
}

}  // namespace

Instance parse_gsrc(const std::string& blocks_text, const std::string& nets_text,
                    const std::string& pl_text, bool include_terminals) {
    if (include_terminals && pl_text.empty())
        fail("gsrc: terminal coordinates require a .pl document");

    Instance inst;
    std::unordered_map<std::string, int> block_index;
    std::unordered_set<std::string> terminal_names;

    for (const auto& [no, line] : content_lines(blocks_text)) {
        auto toks = tokens_of(line);
        if (is_header_line(toks)) continue;
        if (toks.size() == 2 && toks[1] == "terminal") {
            terminal_names.insert(toks[0]);
            continue;
        }
        if (toks.size() >= 3 && toks[1] == "hardrectilinear") {
            const std::string where = detail::fmt("blocks:%d", no);
            int corners = 0;
            try {
                corners = std::stoi(toks[2]);
            } catch (const std::exception&) {
                fail(detail::fmt("%s: bad corner count", where.c_str()));
            }
            if (corners != 4)
                fail(detail::fmt("%s: block '%s' has %d corners; only rectangles "
                                 "(4) are supported",
                                 where.c_str(), toks[0].c_str(), corners));
            auto pos = line.find('(');
            if (pos == std::string::npos)
                fail(detail::fmt("%s: missing corner list", where.c_str()));
            auto ints = extract_ints(line.substr(pos), where.c_str());
            if (ints.size() != 8)
                fail(detail::fmt("%s: expected 4 (x,y) corners", where.c_str()));
            coord_t xlo = ints[0], xhi = ints[0], ylo = ints[1], yhi = ints[1];
            for (int c = 0; c < 4; ++c) {
                xlo = std::min(xlo, ints[2 * c]);
                xhi = std::max(xhi, ints[2 * c]);
                ylo = std::min(ylo, ints[2 * c + 1]);
                yhi = std::max(yhi, ints[2 * c + 1]);
            }
            std::set<std::pair<coord_t, coord_t>> got, want;
            for (int c = 0; c < 4; ++c) got.insert({ints[2 * c], ints[2 * c + 1]});
            want = {{xlo, ylo}, {xlo, yhi}, {xhi, ylo}, {xhi, yhi}};
            if (got != want || xhi <= xlo || yhi <= ylo)
                fail(detail::fmt("%s: block '%s' corners do not form a box",
                                 where.c_str(), toks[0].c_str()));
            if (block_index.count(toks[0]))
                fail(detail::fmt("%s: duplicate block '%s'", where.c_str(),
                                 toks[0].c_str()));
            Rect r;
            r.name = toks[0];
            coord_t w = xhi - xlo, h = yhi - ylo;
            r.variants.push_back(Variant{w, h});
            if (w != h) r.variants.push_back(Variant{h, w});
            block_index[r.name] = inst.n();
            inst.rects.push_back(std::move(r));
            continue;
        }
        fail(detail::fmt("blocks:%d: unrecognized line '%s'", no, line.c_str()));
    }

    std::unordered_map<std::string, IntPoint> terminal_pos;
    if (include_terminals) {
        for (const auto& [no, line] : content_lines(pl_text)) {
            auto toks = tokens_of(line);
            if (is_header_line(toks)) continue;
            if (toks.size() < 3) fail(detail::fmt("pl:%d: expected name x y", no));
            if (!terminal_names.count(toks[0])) continue;  // block positions unused
            try {
                terminal_pos[toks[0]] =
                    IntPoint{static_cast<coord_t>(std::stoll(toks[1])),
                             static_cast<coord_t>(std::stoll(toks[2]))};
            } catch (const std::exception&) {
                fail(detail::fmt("pl:%d: bad coordinates", no));
            }
        }
    }

    const auto net_lines = content_lines(nets_text);
    size_t li = 0;
    while (li < net_lines.size()) {
        const auto& [no, line] = net_lines[li];
        auto toks = tokens_of(line);
        if (is_header_line(toks)) {
            ++li;
            continue;
        }
        if (toks.size() >= 3 && toks[0] == "NetDegree" && toks[1] == ":") {
            int degree = 0;
            try {
                degree = std::stoi(toks[2]);
            } catch (const std::exception&) {
                fail(detail::fmt("nets:%d: bad degree", no));
            }
            ++li;
            std::vector<int> members;
            std::vector<std::string> term_pins;
            for (int k = 0; k < degree; ++k, ++li) {
                if (li >= net_lines.size())
                    fail(detail::fmt("nets:%d: truncated net of degree %d", no,
                                     degree));
                auto pin = tokens_of(net_lines[li].second);
                auto bit = block_index.find(pin[0]);
                if (bit != block_index.end()) {
                    members.push_back(bit->second);
                } else if (terminal_names.count(pin[0])) {
                    term_pins.push_back(pin[0]);
                } else {
                    fail(detail::fmt("nets:%d: unknown pin '%s'",
                                     net_lines[li].first, pin[0].c_str()));
                }
            }
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()),
                          members.end());
            if (members.size() < 2) continue;  // HPWL-degenerate for block centroids
            Net net;
            net.members = std::move(members);
            net.cost = 1.0;
            if (include_terminals)
                for (const std::string& t : term_pins) {
                    auto it = terminal_pos.find(t);
                    if (it == terminal_pos.end())
                        fail(detail::fmt("nets: terminal '%s' has no position in "
                                         ".pl",
                                         t.c_str()));
                    net.anchors.push_back(it->second);
                }
            inst.nets.push_back(std::move(net));
            continue;
        }
        fail(detail::fmt("nets:%d: unrecognized line '%s'", no, line.c_str()));
    }

    auto errs = validate_instance(inst);
    if (!errs.empty()) fail("gsrc: " + errs.front());
    return inst;
}

// ---- SVG -------------------------------------------------------------------

namespace {

constexpr coord_t kScale = 8;    // pixels per unit
constexpr coord_t kMargin = 16;  // canvas border in pixels

}  // namespace

std::string render_svg(const Placement& p, const Instance& inst) {
    coord_t W = 0, H = 0;
    std::vector<Box> boxes(inst.n());
    for (int i = 0; i < inst.n(); ++i) {
        boxes[i] = p.rect_box(inst, i);
        W = std::max(W, boxes[i].x + boxes[i].w);
        H = std::max(H, boxes[i].y + boxes[i].h);
    }
    for (const Blockage& b : inst.blockages) {
        W = std::max(W, b.box.x + b.box.w);
        H = std::max(H, b.box.y + b.box.h);
    }

    // y grows upward in layouts, downward in SVG: flip around the canvas top.
    auto px = [](coord_t x) { return kMargin + x * kScale; };
    auto py = [H](coord_t y) { return kMargin + (H - y) * kScale; };

    std::string out;
    out += detail::fmt(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%lld\" "
        "height=\"%lld\" font-family=\"monospace\">\n",
        static_cast<long long>(W * kScale + 2 * kMargin),
        static_cast<long long>(H * kScale + 2 * kMargin));
    out +=
        "  <defs>\n"
        "    <pattern id=\"hatch\" width=\"8\" height=\"8\" "
        "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n"
        "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#999999\" "
        "stroke-width=\"2\"/>\n"
        "    </pattern>\n"
        "  </defs>\n";
    out += detail::fmt(
        "  <rect class=\"outline\" x=\"%lld\" y=\"%lld\" width=\"%lld\" "
        "height=\"%lld\" fill=\"none\" stroke=\"#bbbbbb\"/>\n",
        static_cast<long long>(px(0)), static_cast<long long>(py(H)),
        static_cast<long long>(W * kScale), static_cast<long long>(H * kScale));

    for (const Blockage& b : inst.blockages)
        out += detail::fmt(
            "  <rect class=\"blockage\" x=\"%lld\" y=\"%lld\" width=\"%lld\" "
            "height=\"%lld\" fill=\"url(#hatch)\" stroke=\"#666666\"/>\n",
            static_cast<long long>(px(b.box.x)),
            static_cast<long long>(py(b.box.y + b.box.h)),
            static_cast<long long>(b.box.w * kScale),
            static_cast<long long>(b.box.h * kScale));

    for (int i = 0; i < inst.n(); ++i) {
        const Box& b = boxes[i];
        out += detail::fmt(
            "  <rect class=\"device\" x=\"%lld\" y=\"%lld\" width=\"%lld\" "
            "height=\"%lld\" fill=\"#cfe2f3\" stroke=\"#335577\"/>\n",
            static_cast<long long>(px(b.x)), static_cast<long long>(py(b.y + b.h)),
            static_cast<long long>(b.w * kScale),
            static_cast<long long>(b.h * kScale));
        // centroid in half-units: doubled coordinate * kScale / 2 stays integral
        coord_t cx2 = 2 * b.x + b.w, cy2 = 2 * b.y + b.h;
        out += detail::fmt(
            "  <text x=\"%lld\" y=\"%lld\" font-size=\"10\" "
            "text-anchor=\"middle\" dominant-baseline=\"central\">%s</text>\n",
            static_cast<long long>(kMargin + cx2 * kScale / 2),
            static_cast<long long>(kMargin + H * kScale - cy2 * kScale / 2),
            inst.rects[i].name.c_str());
    }

    for (const Net& net : inst.nets) {
        if (net.members.size() < 2 || net.cost == 0.0) continue;
        coord_t xlo2 = std::numeric_limits<coord_t>::max(), xhi2 = 0;
        coord_t ylo2 = std::numeric_limits<coord_t>::max(), yhi2 = 0;
        for (int m : net.members) {
            coord_t cx2 = 2 * boxes[m].x + boxes[m].w;
            coord_t cy2 = 2 * boxes[m].y + boxes[m].h;
            xlo2 = std::min(xlo2, cx2);
            xhi2 = std::max(xhi2, cx2);
            ylo2 = std::min(ylo2, cy2);
            yhi2 = std::max(yhi2, cy2);
        }
        out += detail::fmt(
            "  <rect class=\"net\" x=\"%lld\" y=\"%lld\" width=\"%lld\" "
            "height=\"%lld\" fill=\"none\" stroke=\"#c0392b\" "
            "stroke-dasharray=\"6,4\" opacity=\"0.7\"/>\n",
            static_cast<long long>(kMargin + xlo2 * kScale / 2),
            static_cast<long long>(kMargin + H * kScale - yhi2 * kScale / 2),
            static_cast<long long>((xhi2 - xlo2) * kScale / 2),
            static_cast<long long>((yhi2 - ylo2) * kScale / 2));
    }

    for (size_t g = 0; g < inst.groups.size(); ++g) {
        coord_t a2 = p.axes2[g];
        if (inst.groups[g].axis == Axis::Vertical)
            out += detail::fmt(
                "  <line class=\"axis\" x1=\"%lld\" y1=\"%lld\" x2=\"%lld\" "
                "y2=\"%lld\" stroke=\"#8e44ad\" stroke-dasharray=\"2,6\"/>\n",
                static_cast<long long>(kMargin + a2 * kScale / 2),
                static_cast<long long>(py(H)),
                static_cast<long long>(kMargin + a2 * kScale / 2),
                static_cast<long long>(py(0)));
        else
            out += detail::fmt(
                "  <line class=\"axis\" x1=\"%lld\" y1=\"%lld\" x2=\"%lld\" "
                "y2=\"%lld\" stroke=\"#8e44ad\" stroke-dasharray=\"2,6\"/>\n",
                static_cast<long long>(px(0)),
                static_cast<long long>(kMargin + H * kScale - a2 * kScale / 2),
                static_cast<long long>(px(W)),
                static_cast<long long>(kMargin + H * kScale - a2 * kScale / 2));
    }

    out += "</svg>\n";
    return out;
}

// ---- files -----------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read failure: " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace amsplace

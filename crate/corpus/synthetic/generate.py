#!/usr/bin/env python3
"""Builds the synthetic trace and the expected pipeline outputs.

Everything here is computed independently of the Rust code: metrics by
direct counting over events, source facts with a small hand-written Java
scanner, Kendall tau-b by pair enumeration and quartiles with numpy.

Run from any directory:

    python3 corpus/synthetic/generate.py

Writes traces/scenario.trace and expected/*.tsv next to this script.
"""

import math
import random
import re
from pathlib import Path

import numpy as np
from scipy.special import erfc

HERE = Path(__file__).resolve().parent
SRC = HERE
SEED = 20241017
EPISODES = 60
MAX_DEPTH = 7

INCLUDE = ("app.",)
EXCLUDE = ("app.vendor.",)
ALPHA = 0.05

# caller method -> list of (callee method, max repetitions)
CALLS = {
    "app.ui.Window.open": [
        ("app.core.Engine.start", 1),
        ("app.ui.Window.repaint", 2),
        ("app.ui.Menu.show", 2),
    ],
    "app.ui.Window.repaint": [("java.awt.Graphics.drawString", 2)],
    "app.ui.Menu.show": [("app.ui.Window.repaint", 1)],
    "app.core.Engine.start": [
        ("app.util.Config.load", 1),
        ("app.core.Registry.lookup", 3),
        ("app.core.Parser.parse", 2),
        ("app.core.Engine.step", 2),
    ],
    "app.util.Config.load": [("java.util.Properties.load", 1)],
    "app.core.Registry.lookup": [
        ("app.core.Cache.get", 2),
        ("app.core.Cache.put", 1),
        ("app.vendor.Json.parse", 1),
    ],
    "app.vendor.Json.parse": [("app.core.Token.create", 2)],
    "app.core.Cache.get": [("app.core.Cache.hash", 1)],
    "app.core.Cache.put": [("app.core.Cache.hash", 1)],
    "app.core.Parser.parse": [
        ("app.core.Lexer.next", 4),
        ("app.core.Token.kind", 3),
        ("java.util.ArrayList.add", 3),
    ],
    "app.core.Lexer.next": [("app.core.Token.create", 1), ("app.core.Lexer.peek", 1)],
    "app.core.Token.create": [("app.core.Token.<init>", 1)],
    "app.core.Scheduler.run": [
        ("app.io.Reader.read", 3),
        ("app.core.Engine.step", 2),
        ("app.io.Writer.write", 2),
    ],
    "app.io.Reader.read": [("app.io.Codec.decode", 1)],
    "app.io.Writer.write": [("app.io.Codec.encode", 1), ("java.io.OutputStream.write", 1)],
}

ENTRY_POINTS = [("main", "app.ui.Window.open"), ("worker-1", "app.core.Scheduler.run")]


def split_method(qualified):
    cls, _, method = qualified.rpartition(".")
    return cls, method


def simulate(rng):
    events = []

    def visit(thread, method, depth):
        if depth >= MAX_DEPTH:
            return
        for callee, most in CALLS.get(method, []):
            for _ in range(rng.randint(0, most)):
                events.append((thread, method, callee))
                visit(thread, callee, depth + 1)

    for _ in range(EPISODES):
        thread, entry = rng.choice(ENTRY_POINTS)
        events.append((thread, None, entry))
        visit(thread, entry, 1)
    return events


def write_trace(events, path):
    lines = [
        "# synthetic scenario trace",
        "# seq\tthread\tcaller_class\tcaller_method\tcallee_class\tcallee_method",
    ]
    for seq, (thread, caller, callee) in enumerate(events):
        cc, cm = split_method(caller) if caller else ("-", "-")
        ec, em = split_method(callee)
        lines.append(f"{seq}\t{thread}\t{cc}\t{cm}\t{ec}\t{em}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def in_scope(cls):
    return any(cls.startswith(p) for p in INCLUDE) and not any(cls.startswith(p) for p in EXCLUDE)


def dynamic_metrics(events):
    classes = set()
    for _, caller, callee in events:
        classes.add(split_method(callee)[0])
        if caller:
            classes.add(split_method(caller)[0])
    table = {}
    for c in sorted(classes):
        if not in_scope(c):
            continue
        ic = ec = ef = 0
        for _, caller, callee in events:
            src = split_method(caller)[0] if caller else None
            dst = split_method(callee)[0]
            if dst == c:
                ef += 1
                if src is not None and src != c and in_scope(src):
                    ic += 1
            if src == c and dst != c and in_scope(dst):
                ec += 1
        if ic or ec or ef:
            table[c] = (ic, ec, ef)
    return table


# ---------------------------------------------------------------- sources


def strip_code(text):
    """Returns the code of each line with comments dropped and literal bodies emptied."""
    out = []
    block = False
    for line in text.split("\n"):
        code = []
        i = 0
        while i < len(line):
            if block:
                end = line.find("*/", i)
                if end < 0:
                    i = len(line)
                else:
                    block = False
                    code.append(" ")
                    i = end + 2
                continue
            ch = line[i]
            if line.startswith("//", i):
                break
            if line.startswith("/*", i):
                block = True
                i += 2
                continue
            if ch in "\"'":
                j = i + 1
                while j < len(line) and line[j] != ch:
                    j += 2 if line[j] == "\\" else 1
                code.append(ch + ch)
                i = j + 1
                continue
            code.append(ch)
            i += 1
        out.append("".join(code))
    if text.endswith("\n"):
        out.pop()
    return out


def scan():
    units = []
    warnings = []
    for path in sorted(SRC.rglob("*.java")):
        if "out" in path.relative_to(SRC).parts:
            continue
        rel = path.relative_to(SRC).as_posix()
        code = strip_code(path.read_text())
        decls = [m.group(1) for line in code
                 for m in re.finditer(r"\b(?:class|interface|enum|record)\s+(\w+)", line)]
        if not decls:
            warnings.append(rel)
            continue
        name = path.stem
        assert decls[0] == name, (rel, decls)
        package = next(m.group(1) for line in code
                       if (m := re.match(r"\s*package\s+([\w.]+)\s*;", line)))
        is_test = re.search(r"(^|/)src/test/", rel) is not None or name.endswith("Test")
        units.append({
            "id": f"{package}.{name}",
            "name": name,
            "package": package,
            "path": rel,
            "test": is_test,
            "code": code,
            "sloc": sum(1 for line in code if line.strip()),
            "ntc": count_tests(code) if is_test else None,
        })
    units.sort(key=lambda u: (u["id"], u["path"]))
    return units, warnings


def count_tests(code):
    joined = "\n".join(code)
    annotated = len(re.findall(r"@Test\b", joined))
    junit3 = len(re.findall(r"\bvoid\s+test\w*\s*\(", joined))
    return annotated + junit3


def links(units):
    tests = [u for u in units if u["test"]]
    prods = [u for u in units if not u["test"]]
    found = {}
    for t in tests:
        if t["name"].endswith("Test"):
            stem = t["name"][: -len("Test")]
            cands = [p for p in prods if p["name"] == stem]
            if len(cands) > 1:
                cands = [p for p in cands if p["package"] == t["package"]]
            if len(cands) == 1:
                found[(t["id"], cands[0]["id"])] = "naming"
        words = set()
        for line in t["code"]:
            if re.match(r"\s*(import|package)\b", line):
                continue
            words.update(re.findall(r"[A-Za-z_$][\w$]*", line))
        for p in prods:
            if p["name"] in words:
                key = (t["id"], p["id"])
                found[key] = "both" if found.get(key, "callgraph") != "callgraph" else "callgraph"
    return found


# -------------------------------------------------------------- statistics


def kendall(x, y):
    n = len(x)
    conc = disc = 0
    n0 = n * (n - 1) // 2
    tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = np.sign(x[i] - x[j])
            dy = np.sign(y[i] - y[j])
            if dx == 0:
                tx += 1
            if dy == 0:
                ty += 1
            if dx * dy > 0:
                conc += 1
            elif dx * dy < 0:
                disc += 1
    if tx == n0 or ty == n0:
        return None
    s = conc - disc
    tau = s / math.sqrt((n0 - tx) * (n0 - ty))

    def groups(v):
        return [v.count(val) for val in set(v)]

    gx, gy = groups(list(x)), groups(list(y))
    var = (n * (n - 1) * (2 * n + 5)
           - sum(t * (t - 1) * (2 * t + 5) for t in gx)
           - sum(u * (u - 1) * (2 * u + 5) for u in gy)) / 18
    var += sum(t * (t - 1) for t in gx) * sum(u * (u - 1) for u in gy) / (2 * n * (n - 1))
    var += (sum(t * (t - 1) * (t - 2) for t in gx) * sum(u * (u - 1) * (u - 2) for u in gy)
            / (9 * n * (n - 1) * (n - 2)))
    assert n > 8, "expected file assumes the normal approximation"
    p = 1.0 if s == 0 else min(1.0, erfc((abs(s) - 1) / math.sqrt(var) / math.sqrt(2)))
    return tau, p


def band(tau):
    pct = math.floor(abs(tau) * 100 + 0.5 + 1e-9)
    strength = "none" if pct == 0 else "low" if pct < 30 else "medium" if pct < 60 else "strong"
    direction = "none" if tau == 0 else "direct" if tau > 0 else "inverse"
    return strength, direction


def boxplot(values):
    v = np.sort(np.asarray(values, dtype=float))
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo) & (v <= hi)]
    outliers = v[(v < lo) | (v > hi)]
    return (len(v), min(inside.min(), q1), q1, med, q3, max(inside.max(), q3), list(outliers))


# ------------------------------------------------------------------ output


def main():
    rng = random.Random(SEED)
    events = simulate(rng)
    write_trace(events, HERE / "traces" / "scenario.trace")
    expected = HERE / "expected"
    expected.mkdir(exist_ok=True)

    metrics = dynamic_metrics(events)
    (expected / "metrics.tsv").write_text(
        "".join(f"{c}\t{ic}\t{ec}\t{ef}\n" for c, (ic, ec, ef) in sorted(metrics.items())))
    ranking = sorted(metrics.items(), key=lambda kv: (-kv[1][2], kv[0]))
    (expected / "key_classes.tsv").write_text(
        "".join(f"{i + 1}\t{c}\t{m[2]}\n" for i, (c, m) in enumerate(ranking)))

    units, _ = scan()
    units = [u for u in units if u["test"] or in_scope(u["id"])]
    rows = ["class_id\tkind\tpath\tlines\tntc\n"]
    for u in units:
        kind = "test" if u["test"] else "production"
        ntc = u["ntc"] if u["test"] else "-"
        rows.append(f"{u['id']}\t{kind}\t{u['path']}\t{u['sloc']}\t{ntc}\n")
    (expected / "sources.tsv").write_text("".join(rows))

    prods = [u for u in units if not u["test"]]
    tests = [u for u in units if u["test"]]
    kloc = sum(u["sloc"] for u in prods) / 1000
    size = ("small" if kloc < 1 else "medium" if kloc < 10
            else "large" if kloc < 100 else "extra-large")
    (expected / "corpus_summary.tsv").write_text(
        f"kloc\t{kloc:.3f}\nnoc\t{len(prods)}\ntest_classes\t{len(tests)}\n"
        f"ntc\t{sum(u['ntc'] for u in tests)}\n"
        f"test_kloc\t{sum(u['sloc'] for u in tests) / 1000:.3f}\nsize_band\t{size}\n")

    by_id = {u["id"]: u for u in units}
    grouped = {}
    for (t, p), how in links(units).items():
        grouped.setdefault(p, {})[t] = how
    suites = {}
    lines = []
    for p in sorted(grouped):
        linked = dict(sorted(grouped[p].items()))
        tloc = sum(by_id[t]["sloc"] for t in linked)
        ntc = sum(by_id[t]["ntc"] for t in linked)
        suites[p] = (tloc, ntc)
        lines.append(f"{p}\t{tloc}\t{ntc}\t{','.join(linked)}\t{','.join(linked.values())}\n")
    (expected / "test_metrics.tsv").write_text("".join(lines))

    table = [(c, *metrics[c], *suites[c]) for c in sorted(suites) if c in metrics]
    (expected / "observations.tsv").write_text(
        "class_id\tIC\tEC\tEF\tTLOC\tNTC\n"
        + "".join("\t".join(map(str, r)) + "\n" for r in table))

    col = {name: [r[i + 1] for r in table] for i, name in enumerate(["IC", "EC", "EF", "TLOC", "NTC"])}
    pairs = [("IC", "TLOC"), ("EC", "TLOC"), ("EF", "TLOC"), ("IC", "NTC"),
             ("EC", "NTC"), ("EF", "NTC"), ("IC", "EF"), ("EC", "EF")]
    out = ["pair\ttau\tp\tn\tstrength\tdirection\tsignificant\n"]
    for x, y in pairs:
        res = kendall(col[x], col[y])
        if res is None:
            out.append(f"{x}/{y}\tNA\tNA\t{len(table)}\tdegenerate\tNA\tNA\n")
            continue
        tau, p = res
        strength, direction = band(tau)
        sig = "true" if p <= ALPHA else "false"
        out.append(f"{x}/{y}\t{tau:.6f}\t{p:.6f}\t{len(table)}\t{strength}\t{direction}\t{sig}\n")
    (expected / "correlations.tsv").write_text("".join(out))

    out = ["variable\tn\tmin\tq1\tmedian\tq3\tmax\toutliers\n"]
    for name, values in col.items():
        n, lo, q1, med, q3, hi, outliers = boxplot(values)
        out.append(f"{name}\t{n}\t{lo:.3f}\t{q1:.3f}\t{med:.3f}\t{q3:.3f}\t{hi:.3f}\t"
                   + ",".join(f"{v:.3f}" for v in outliers) + "\n")
    (expected / "boxplots.tsv").write_text("".join(out))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
# Copyright 2026 The kbner Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Brute-force reference pipeline used to freeze the golden files.

This is a deliberately naive, self-contained re-statement of the corpus
rules (no shared code with the C++ library): the longest-match scan is
O(n * patterns), type votes are recounted from scratch, and every report
is recomputed from the raw sentence list.

Usage: minikb_oracle.py KB DUMP MAPPING OUTDIR
"""

import json
import os
import sys
from collections import Counter, defaultdict

# ---------------------------------------------------------------- text rules

SPACES = set(" \t\n\v\f\r\u00a0\u1680\u2028\u2029\u202f\u205f\u3000") | {
    chr(c) for c in range(0x2000, 0x200B)}
APOSTROPHES = {"'", "\u2019"}
PUNCT = set('!"#$%&()*+,-./:;<=>?@[\\]^_`{|}~') | set(
    "\u00ab\u00bb\u201c\u201d\u201e\u2018\u201a\u2039\u203a\u2026\u2013\u2014"
    "\u2010\u2011\u2012\u2015\u00b7\u2022\u00a1\u00bf\u00a7\u00b6\u00b0\u2032"
    "\u2033\u2030")
TERMINATORS = {".", "!", "?", "\u2026"}
ABBREVIATIONS = {
    "Dr.", "Prof.", "Doç.", "Yrd.", "Av.", "Op.", "Uzm.", "Müh.", "Öğr.",
    "Gör.", "Sn.", "St.", "Mr.", "Mrs.", "Ms.", "Jr.", "Sr.", "vb.", "vs.",
    "vd.", "yy.", "bkz.", "örn.", "Ltd.", "Şti.", "Inc.", "Co.", "No.", "Nr.",
    "Tel.", "Cad.", "Sok.", "Mah.", "Apt.", "Alb.", "Gen.", "Org.", "Kor.",
    "Tuğg.", "Hz.", "M.Ö.", "M.S.", "age.", "a.g.e.", "s.", "ss.", "Bşk.",
    "Müd."}
TR_STOP = set("""ve bir bu da de ne için çok ile gibi daha en şu o ama veya ki mi
olan olarak sonra kadar her bazı göre ancak hem ise değil var yok tarafından
ayrıca ya hiç biri şey diye çünkü yani üzere arasında""".split())
EN_STOP = set("""the a an and or of to in is was are were be been it that this with
for on as by at from his her he she they not but have has had which who over
into about its their there what when where""".split())
TURKISH_CHARS = set("çğıİöşüÇĞÖŞÜ")


def is_word(c):
    return c not in SPACES and c not in PUNCT and c not in APOSTROPHES


def is_upper(c):
    o = ord(c)
    return ("A" <= c <= "Z") or c in "ÇĞİÖŞÜ" or (0xC0 <= o <= 0xDE and o != 0xD7)


def fold(s):
    out = []
    for c in s:
        if c == "I":
            out.append("ı")
        elif c == "İ":
            out.append("i")
        elif "A" <= c <= "Z":
            out.append(chr(ord(c) + 32))
        elif c in "ÇĞŞ":
            out.append({"Ç": "ç", "Ğ": "ğ", "Ş": "ş"}[c])
        elif 0xC0 <= ord(c) <= 0xDE and ord(c) != 0xD7:
            out.append(chr(ord(c) + 32))
        else:
            out.append(c)
    return "".join(out)


def tokenize(s):
    """Returns list of (text, is_punct)."""
    toks = []
    cur = None
    n = len(s)
    i = 0
    while i < n:
        c = s[i]
        nxt = s[i + 1] if i + 1 < n else None
        if c in SPACES:
            if cur is not None:
                toks.append((cur, False))
                cur = None
        elif c in APOSTROPHES:
            if cur is not None:
                toks.append((cur, False))
                cur = None
            if nxt is not None and is_word(nxt):
                cur = c
            else:
                toks.append((c, True))
        elif c in PUNCT:
            if (c == "-" and cur is not None and nxt is not None and is_word(nxt)):
                cur += c
            elif (c in ".," and cur is not None and cur[-1].isascii()
                  and cur[-1].isdigit() and nxt is not None and nxt.isascii()
                  and nxt.isdigit()):
                cur += c
            else:
                if cur is not None:
                    toks.append((cur, False))
                    cur = None
                toks.append((c, True))
        else:
            cur = c if cur is None else cur + c
        i += 1
    if cur is not None:
        toks.append((cur, False))
    return toks


def strip_spaces(s):
    a, b = 0, len(s)
    while a < b and s[a] in SPACES:
        a += 1
    while b > a and s[b - 1] in SPACES:
        b -= 1
    return s[a:b]


def suppressed(p, start, i):
    k = i
    while k > start and p[k - 1] not in SPACES:
        k -= 1
    word = p[k:i]
    while word and (word[0] in PUNCT or word[0] in APOSTROPHES):
        word = word[1:]
    if not word:
        return False
    if word + "." in ABBREVIATIONS:
        return True
    if len(word) == 1 and is_word(word) and not word.isdigit():
        return True
    if all("0" <= c <= "9" for c in word):
        return True
    return False


def split_paragraphs(text):
    """Blank lines (only whitespace) separate paragraphs."""
    out, cur = [], []
    for line in text.split("\n"):
        if all(c in SPACES for c in line):
            if cur:
                out.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    if cur:
        out.append("\n".join(cur))
    return out


def split_sentences(text):
    out = []
    for p in split_paragraphs(text):
        n = len(p)
        start = 0
        i = 0
        while i < n:
            if p[i] in TERMINATORS:
                j = i
                while j < n and p[j] in TERMINATORS:
                    j += 1
                k = j
                while k < n and p[k] in SPACES:
                    k += 1
                single_dot = (j == i + 1 and p[i] == ".")
                if (k > j and k < n and (is_upper(p[k]) or ("0" <= p[k] <= "9"))
                        and not (single_dot and suppressed(p, start, i))):
                    s = strip_spaces(p[start:j])
                    if s:
                        out.append(s)
                    start = k
                    i = k
                    continue
                i = j
                continue
            i += 1
        s = strip_spaces(p[start:])
        if s:
            out.append(s)
    return out


def language_score(text):
    words = [t for t, punct in tokenize(text) if not punct]
    if not words:
        return 0.0
    tr = sum(1 for w in words if fold(w) in TR_STOP)
    en = sum(1 for w in words if fold(w) in EN_STOP)
    special = sum(1 for w in words if any(c in TURKISH_CHARS for c in w))
    chars = min(1.0, 4.0 * special / len(words))
    if tr + en == 0:
        return chars
    return 0.75 * (tr / (tr + en)) + 0.25 * chars


# ------------------------------------------------------------------ KB rules

def fnv1a(data):
    h = 0xcbf29ce484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return "%016x" % h


def domain_of(path):
    return path.split("/")[1]


def load_kb(path):
    raw = open(path, "rb").read()
    lines = raw.decode("utf-8").split("\n")
    assert lines[0] == "#kbsnap v1"
    merges = {}
    ents = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        obj = json.loads(line)
        if "merge_domain" in obj:
            merges[obj["merge_domain"]] = obj["into"]
            continue
        ents[obj["mid"]] = obj

    def remap(p):
        segs = p.split("/")
        segs[1] = merges.get(segs[1], segs[1])
        return "/".join(segs)

    for e in ents.values():
        e["types"] = [remap(t) for t in e["types"]]
        for r in e["relations"]:
            r["predicate"] = remap(r["predicate"])
    return ents, fnv1a(raw)


def supports(ents, edge, dom):
    if domain_of(edge["predicate"]) == dom:
        return True
    tgt = edge.get("target_mid")
    if tgt is not None and tgt in ents:
        return any(domain_of(t) == dom for t in ents[tgt]["types"])
    return False


def resolve(ents, mid):
    e = ents[mid]
    best = None
    for t in e["types"]:
        d = domain_of(t)
        first = sum(1 for r in e["relations"] if supports(ents, r, d))
        second = 0
        for r in e["relations"]:
            tgt = r.get("target_mid")
            if tgt is not None and tgt in ents:
                second += sum(1 for r2 in ents[tgt]["relations"]
                              if supports(ents, r2, d))
        key = (-first, -second, t)
        if best is None or key < best:
            best = key
    return best[2]


def second_order(ents, mid):
    e = ents[mid]
    first = {r["target_mid"] for r in e["relations"]
             if "target_mid" in r and r["target_mid"] in ents}
    out = set()
    for f in first:
        for r in ents[f]["relations"]:
            u = r.get("target_mid")
            if u is None or u not in ents or u == mid or u in first:
                continue
            if ents[u]["types"]:
                out.add(u)
    return [(u, resolve(ents, u)) for u in sorted(out)]


def surfaces(e):
    seen = []
    for s in [e["name"]] + e["aliases"]:
        toks = tuple(t for t, _ in tokenize(s))
        if toks and toks not in seen:
            seen.append(toks)
    return seen


def build_gazetteer(ents):
    gaz = {}
    for mid in sorted(ents):
        if not ents[mid]["types"]:
            continue
        gaz[mid] = (resolve(ents, mid), surfaces(ents[mid]))
    return gaz


# -------------------------------------------------------------- annotation

def unescape(s):
    out = []
    i = 0
    while i < len(s):
        if s[i] == "\\" and i + 1 < len(s):
            out.append({"n": "\n", "t": "\t", "r": "\r", "\\": "\\"}[s[i + 1]])
            i += 2
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def load_dump(path):
    lines = open(path, encoding="utf-8").read().split("\n")
    assert lines[0] == "#wikidump v1"
    docs = {}
    for line in lines[1:]:
        if not line:
            continue
        key, title, mid, text = line.split("\t")
        docs[unescape(key)] = unescape(text)
    return docs


def brute_longest(tokens, lo, hi, patterns):
    """Greedy leftmost-longest over tokens[lo:hi]; patterns: {tuple: payload}."""
    found = []
    i = lo
    while i < hi:
        best = 0
        for p in patterns:
            L = len(p)
            if L > best and i + L <= hi and tuple(tokens[i:i + L]) == p:
                best = L
        if best:
            found.append((i, best, patterns[tuple(tokens[i:i + best])]))
            i += best
        else:
            i += 1
    return found


def pattern_table(gaz, mids, prefer):
    table = {}
    for mid in mids:
        t, surfs = gaz[mid]
        for s in surfs:
            table.setdefault(s, set()).add(mid)
    out = {}
    for s, ms in table.items():
        chosen = prefer if prefer in ms else min(ms)
        out[s] = (chosen, gaz[chosen][0])
    return out


def runs(flags):
    i = 0
    n = len(flags)
    while i < n:
        if flags[i]:
            j = i
            while j < n and flags[j]:
                j += 1
            yield i, j
            i = j
        else:
            i += 1


def annotate_cpn(ents, gaz, docs, cpn, threshold):
    e = ents[cpn]
    if e.get("article_key") and e["article_key"] in docs:
        key, text = e["article_key"], docs[e["article_key"]]
    elif e.get("description", "").strip():
        key, text = "desc:" + cpn, e["description"]
    else:
        return None
    if not strip_spaces(text) or language_score(text) < threshold:
        return []
    first_mids = [cpn] + [r["target_mid"] for r in e["relations"]
                          if "target_mid" in r and r["target_mid"] in gaz]
    first = pattern_table(gaz, first_mids, cpn)
    second = pattern_table(gaz, [m for m, _ in second_order(ents, cpn) if m in gaz], None)
    cpn_domain = domain_of(gaz[cpn][0])
    out = []
    for idx, sent in enumerate(split_sentences(text)):
        toks = tokenize(sent)
        words = [t for t, _ in toks]
        tags = ["O"] * len(toks)
        spans = []
        for lo, hi in runs([not p for _, p in toks]):
            spans += brute_longest(words, lo, hi, first)
        for st, L, (mid, typ) in spans:
            tags[st] = "B-" + typ
            for k in range(st + 1, st + L):
                tags[k] = "I-" + typ
        extra = []
        for lo, hi in runs([(not toks[k][1]) and tags[k] == "O" for k in range(len(toks))]):
            extra += brute_longest(words, lo, hi, second)
        for st, L, (mid, typ) in extra:
            tags[st] = "B-" + typ
            for k in range(st + 1, st + L):
                tags[k] = "I-" + typ
        spans += extra
        if not spans:
            continue
        counts = Counter(domain_of(typ) for _, _, (_, typ) in spans)
        top = max(counts.values())
        tied = sorted(d for d, c in counts.items() if c == top)
        domain = cpn_domain if cpn_domain in tied else tied[0]
        tagged = sum(1 for t in tags if t != "O")
        out.append((key, idx, words, tags, domain, tagged))
    return out


def annotate_corpus(ents, gaz, docs, threshold):
    best = {}
    for cpn in sorted(gaz):
        res = annotate_cpn(ents, gaz, docs, cpn, threshold)
        if not res:
            continue
        for key, idx, words, tags, domain, tagged in res:
            k = (key, idx)
            if k not in best or tagged > best[k][5]:
                best[k] = (key, idx, words, tags, domain, tagged)
    return [(v[4], v[2], v[3]) for k, v in sorted(best.items())]


# ------------------------------------------------------------ corpus files

def write_corpus(path, meta, sents):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("#twnertc v1\n")
        for k, v in meta:
            f.write("#meta %s=%s\n" % (k, v))
        for dom, words, tags in sents:
            f.write("%s\t%s\t%s\n" % (dom, " ".join(words), " ".join(tags)))


def write_conll(path, sents):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for dom, words, tags in sents:
            f.write("# domain: %s\n" % dom)
            for w, t in zip(words, tags):
                f.write("%s\t%s\n" % (w, t))
            f.write("\n")


def spans_of(tags):
    out = []
    i = 0
    while i < len(tags):
        if tags[i].startswith("B-"):
            lab = tags[i][2:]
            j = i + 1
            while j < len(tags) and tags[j] == "I-" + lab:
                j += 1
            out.append((i, j, lab))
            i = j
        else:
            i += 1
    return out


def reduce_noise(sents, by_domain):
    votes = defaultdict(Counter)
    lengths = defaultdict(Counter)
    for dom, words, tags in sents:
        for a, b, lab in spans_of(tags):
            key = (dom if by_domain else None, tuple(words[a:b]))
            votes[key][lab] += 1
            lengths[key][lab] += b - a
    modal = {}
    for key, c in votes.items():
        modal[key] = sorted(c, key=lambda lab: (-c[lab], -lengths[key][lab], lab))[0]
    out = []
    for dom, words, tags in sents:
        new = list(tags)
        for a, b, lab in spans_of(tags):
            m = modal[(dom if by_domain else None, tuple(words[a:b]))]
            new[a] = "B-" + m
            for k in range(a + 1, b):
                new[k] = "I-" + m
        out.append((dom, words, new))
    return out


LABELS = ["PERSON", "LOCATION", "ORGANIZATION", "MISC"]


def load_mapping(path):
    exact, wild, drop = {}, {}, set()
    for line in open(path, encoding="utf-8").read().split("\n"):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("!drop"):
            drop.add(s.split()[1])
            continue
        k, v = s.split()
        assert v in LABELS or v == "O"
        if k.endswith("/*"):
            wild[k.split("/")[1]] = v
        else:
            exact[k] = v
    return exact, wild, drop


def to_coarse(sents, mapping):
    exact, wild, drop = mapping
    out = []
    for dom, words, tags in sents:
        if dom in drop:
            continue
        new = ["O"] * len(tags)
        for a, b, lab in spans_of(tags):
            if domain_of(lab) in drop:
                c = "O"
            elif lab in exact:
                c = exact[lab]
            elif domain_of(lab) in wild:
                c = wild[domain_of(lab)]
            else:
                raise ValueError("uncovered " + lab)
            if c != "O":
                new[a] = "B-" + c
                for k in range(a + 1, b):
                    new[k] = "I-" + c
        out.append((dom, words, new))
    return out


def is_punct_token(w):
    return all(c in PUNCT or c in APOSTROPHES for c in w)


def stats_text(sents, coarse):
    per_dom = Counter(d for d, _, _ in sents)
    types_by_dom = defaultdict(set)
    all_types = set()
    with_p = without_p = tagged = 0
    label_tokens = Counter()
    for dom, words, tags in sents:
        types_by_dom[dom]
        for w, t in zip(words, tags):
            with_p += 1
            if not is_punct_token(w):
                without_p += 1
            if t != "O":
                tagged += 1
                lab = t[2:]
                all_types.add(lab)
                types_by_dom[dom].add(lab)
                label_tokens[lab] += 1

    def arg(counter, largest):
        if not counter:
            return "- (0)"
        items = sorted(counter.items(), key=lambda kv: ((-kv[1]) if largest else kv[1], kv[0]))
        return "%s (%d)" % items[0]

    uniq = {d: len(s) for d, s in types_by_dom.items()}
    rows = [
        ("# of Sentences", str(len(sents))),
        ("# of Domains", str(len(per_dom))),
        ("Largest Domain (# sentences)", arg(per_dom, True)),
        ("Smallest Domain (# sentences)", arg(per_dom, False)),
        ("# of Tokens (with punctuation)", str(with_p)),
        ("# of Tokens (without punctuation)", str(without_p)),
        ("# of Tagged Tokens", str(tagged)),
        ("# of Unique Entity Types", str(len(all_types))),
        ("Largest Domain (# unique entity types)", arg(uniq, True)),
        ("Smallest Domain (# unique entity types)", arg(uniq, False)),
    ]
    if coarse:
        for lab in LABELS:
            rows.append(("# of %s Tokens" % lab, str(label_tokens[lab])))
    out = "".join("%-42s%s\n" % r for r in rows)
    out += "\ndomain\tsentences\tunique_types\n"
    for d in sorted(per_dom):
        out += "%s\t%d\t%d\n" % (d, per_dom[d], uniq[d])
    return out


def main():
    kb, dump, mapping_path, outdir = sys.argv[1:5]
    threshold = 0.5
    ents, snap_id = load_kb(kb)
    gaz = build_gazetteer(ents)
    docs = load_dump(dump)
    os.makedirs(outdir, exist_ok=True)

    with open(os.path.join(outdir, "gazetteer.tsv"), "w", encoding="utf-8") as f:
        for mid, (t, surfs) in gaz.items():
            f.write("\t".join([mid, t] + [" ".join(s) for s in surfs]) + "\n")

    config = fnv1a(("lang_threshold=%.2f;fold_case=0" % threshold).encode())
    meta = [("snapshot", snap_id), ("config", config)]
    corpus = annotate_corpus(ents, gaz, docs, threshold)
    write_corpus(os.path.join(outdir, "corpus.tsv"), meta, corpus)
    write_conll(os.path.join(outdir, "corpus.conll"), corpus)
    mapping = load_mapping(mapping_path)
    variants = {"": corpus}
    for mode, by_dom in (("di", False), ("dd", True)):
        reduced = reduce_noise(corpus, by_dom)
        variants["_" + mode] = reduced
        write_corpus(os.path.join(outdir, "corpus_%s.tsv" % mode),
                     meta + [("noise", mode)], reduced)
    for suffix, sents in variants.items():
        base_meta = meta + ([("noise", suffix[1:])] if suffix else [])
        cga = to_coarse(sents, mapping)
        write_corpus(os.path.join(outdir, "cga%s.tsv" % suffix),
                     base_meta + [("labels", "coarse")], cga)
        with open(os.path.join(outdir, "stats_cga%s.txt" % suffix), "w", encoding="utf-8") as f:
            f.write(stats_text(cga, True))
        with open(os.path.join(outdir, "stats_corpus%s.txt" % suffix), "w", encoding="utf-8") as f:
            f.write(stats_text(sents, False))

    # Per-entity values used by unit tests.
    with open(os.path.join(outdir, "resolved.tsv"), "w", encoding="utf-8") as f:
        for mid in sorted(ents):
            so = ",".join("%s:%s" % p for p in second_order(ents, mid))
            f.write("%s\t%s\t%s\n" % (mid, resolve(ents, mid), so or "-"))

    probes = {
        "tokenize": {s: [t for t, _ in tokenize(s)] for s in [
            "Titanic, James Cameron tarafından yönetildi.",
            "Ankara'da yaşıyor.", "kelime"]},
        "language": {s: language_score(s) for s in [
            "the quick brown fox jumps over the lazy dog",
            "ve bir bu da ne için çok"]},
        "split": {s: split_sentences(s) for s in [
            "Ankara başkenttir. Nüfusu büyüktür.", "Dr. Ahmet geldi."]},
    }
    with open(os.path.join(outdir, "probes.json"), "w", encoding="utf-8") as f:
        json.dump(probes, f, ensure_ascii=False, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()

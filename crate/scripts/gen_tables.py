"""Regenerate the bundled lookup tables under crates/core/data.

Usage:
    python3 scripts/gen_tables.py --pypinyin DIR --cjk-decomp FILE \
        --cnchar FILE --jieba-dict FILE --out crates/core/data

Inputs:
    --pypinyin     unpacked pypinyin package directory (pinyin_dict.py)
    --cjk-decomp   cjk-decomp.txt(.js) from the `hanzi` npm package
    --cnchar       cnchar.min.js from the `cnchar` npm package (stroke counts)
    --jieba-dict   dict.txt shipped with jieba 0.42
"""
import argparse
import importlib.util
import json
import os
import re
import unicodedata

COMBINING_TONES = {"\u0304": 1, "\u0301": 2, "\u030c": 3, "\u0300": 4}

JIEBA_TO_UPOS = {
    "n": "NOUN", "ng": "NOUN", "s": "NOUN", "t": "NOUN", "tg": "NOUN", "vn": "NOUN",
    "an": "NOUN", "q": "NOUN",
    "nr": "PROPN", "nrt": "PROPN", "nrfg": "PROPN", "ns": "PROPN", "nt": "PROPN", "nz": "PROPN",
    "v": "VERB", "vd": "VERB", "vg": "VERB", "vi": "VERB", "vq": "VERB",
    "a": "ADJ", "ag": "ADJ", "b": "ADJ", "z": "ADJ",
    "ad": "ADV", "d": "ADV", "dg": "ADV", "df": "ADV",
    "p": "ADP", "f": "ADP",
    "c": "CCONJ",
    "u": "PART", "uj": "PART", "ul": "PART", "uz": "PART", "ud": "PART", "ug": "PART",
    "uv": "PART", "y": "PART", "k": "PART",
    "r": "PRON", "rr": "PRON", "rz": "PRON", "rg": "PRON",
    "m": "NUM", "mq": "NUM", "mg": "NUM",
    "e": "INTJ", "o": "INTJ",
    "x": "X", "h": "X", "i": "X", "l": "X", "j": "X", "g": "X", "zg": "X",
}

PUNCT = "，。、；：？！…—·‘’“”（）《》〈〉【】「」『』〔〕,.;:?!()[]\"'-~～/"

MIN_FREQ = 5


def tone3(syl):
    """Marked pinyin to ascii plus tone digit: ü becomes v, ê becomes e."""
    base, tone = [], 0
    for ch in unicodedata.normalize("NFD", syl):
        if ch in COMBINING_TONES:
            tone = tone or COMBINING_TONES[ch]
        elif ch == "\u0308":
            if base and base[-1] == "u":
                base[-1] = "v"
        elif unicodedata.combining(ch):
            continue
        else:
            base.append(ch)
    return "".join(base) + str(tone)


def gen_pinyin(pkg, out):
    spec = importlib.util.spec_from_file_location("pinyin_dict", os.path.join(pkg, "pinyin_dict.py"))
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    rows = []
    for cp, readings in sorted(mod.pinyin_dict.items()):
        if cp > 0xFFFF:
            continue
        syls = []
        for r in readings.split(","):
            s = tone3(r.strip())
            if s not in syls:
                syls.append(s)
        rows.append(f"{chr(cp)}\t{','.join(syls)}")
    with open(os.path.join(out, "pinyin.tsv"), "w", encoding="utf8") as f:
        f.write("# char<TAB>readings (tone digit, 0 = neutral)\n")
        f.write("\n".join(rows) + "\n")


def load_strokes(path):
    text = open(path, encoding="utf8").read()
    m = re.search(r"JSON.parse\('(\{\"0\":.*?\})'\)", text)
    table = json.loads(m.group(1))
    strokes = {}
    for count, chars in table.items():
        for ch in chars:
            strokes.setdefault(ch, int(count))
    return strokes


def gen_glyph(decomp_path, cnchar_path, out):
    strokes = load_strokes(cnchar_path)
    children = {}
    for line in open(decomp_path, encoding="utf8"):
        m = re.match(r"^([^:]+):([a-z0-9/]+)\((.*)\)\s*$", line.strip("`; \n"))
        if not m:
            continue
        key, kind, args = m.groups()
        if key in children:
            continue
        comps = [a for a in args.split(",") if a]
        if kind == "c" or not comps or comps == [key]:
            children[key] = []
            continue
        mult = 1
        rep = re.match(r"r(\d)", kind)
        if kind.startswith("rd"):
            mult = 2
        elif rep:
            mult = int(rep.group(1))
        children[key] = [c for c in comps for _ in range(mult)]

    memo = {}

    def count(key, depth=12):
        if key in strokes:
            return strokes[key]
        if key in memo:
            return memo[key]
        kids = children.get(key) or []
        if not kids or depth == 0:
            return 1
        memo[key] = sum(count(k, depth - 1) for k in kids)
        return memo[key]

    rows = []
    for key in sorted(children):
        rows.append(f"{key}\t{' '.join(children[key])}\t{count(key)}")
    with open(os.path.join(out, "glyph.tsv"), "w", encoding="utf8") as f:
        f.write("# key<TAB>components<TAB>strokes\n")
        f.write("\n".join(rows) + "\n")


def gen_lexicon(dict_path, out):
    rows = [f"{p}\tPUNCT" for p in PUNCT]
    for line in open(dict_path, encoding="utf8"):
        parts = line.split()
        if len(parts) != 3:
            continue
        word, freq, tag = parts
        if int(freq) < MIN_FREQ or any(ch in PUNCT for ch in word):
            continue
        rows.append(f"{word}\t{JIEBA_TO_UPOS.get(tag, 'X')}")
    with open(os.path.join(out, "lexicon.tsv"), "w", encoding="utf8") as f:
        f.write("# word<TAB>UPOS\n")
        f.write("\n".join(rows) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pypinyin", required=True)
    ap.add_argument("--cjk-decomp", required=True)
    ap.add_argument("--cnchar", required=True)
    ap.add_argument("--jieba-dict", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    gen_pinyin(args.pypinyin, args.out)
    gen_glyph(args.cjk_decomp, args.cnchar, args.out)
    gen_lexicon(args.jieba_dict, args.out)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Freeze reference parse trees for tests/fixtures/parser/cases.json.

Runs html5lib (scripting disabled, the same mode a browser uses with
JavaScript turned off) over every case and writes the canonical tree dump
(and body text) that test_parser.cpp compares against. Re-run only when cases change:

    python3 tests/oracles/html5lib_trees.py
"""
import json
import pathlib

import html5lib

HERE = pathlib.Path(__file__).resolve().parent
CASES = HERE.parent / "fixtures" / "parser" / "cases.json"
OUT = HERE.parent / "fixtures" / "parser" / "expected.json"
TEXT_OUT = HERE.parent / "fixtures" / "parser" / "text.json"


def dump(el, depth, out):
    pad = "  " * depth
    if el.text:
        out.append(f'{pad}"{el.text}"')
    for child in el:
        tag = child.tag
        if callable(tag):  # comment
            out.append(f"{pad}<!-- {child.text} -->")
        else:
            name = tag.split("}")[-1]
            out.append(f"{pad}<{name}>")
            for k in sorted(child.attrib):
                out.append(f'{pad}  {k}="{child.attrib[k]}"')
            dump(child, depth + 1, out)
        if child.tail:
            out.append(f'{pad}"{child.tail}"')


def body_text(el):
    """textContent of <body> with script/style subtrees dropped."""
    parts = []

    def walk(node):
        if node.text:
            parts.append(node.text)
        for child in node:
            if not callable(child.tag) and child.tag not in ("script", "style"):
                walk(child)
            if child.tail:
                parts.append(child.tail)

    walk(el)
    return "".join(parts)


def main():
    cases = json.loads(CASES.read_text())
    expected = {}
    texts = {}
    for name, html in cases.items():
        doc = html5lib.parse(html, treebuilder="etree", namespaceHTMLElements=False)
        out = []
        root = doc if doc.tag == "html" else doc.getroot()
        out.append("<html>")
        for k in sorted(root.attrib):
            out.append(f'  {k}="{root.attrib[k]}"')
        dump(root, 1, out)
        expected[name] = "\n".join(out)
        body = root.find("body")
        if body is not None:
            texts[name] = body_text(body)
    OUT.write_text(json.dumps(expected, indent=2, ensure_ascii=False) + "\n")
    TEXT_OUT.write_text(json.dumps(texts, indent=2, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()

"""Small helpers for the comma/parenthesis text syntaxes."""

from __future__ import annotations


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` at parenthesis depth zero."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SyntaxError(f"unbalanced ')' in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SyntaxError(f"unbalanced '(' in {text!r}")
    parts.append("".join(cur).strip())
    return parts


def call_form(text: str) -> tuple[str, str] | None:
    """``name(args)`` -> (name, args) when the parentheses enclose the rest."""
    text = text.strip()
    i = text.find("(")
    if i <= 0 or not text.endswith(")"):
        return None
    name = text[:i].strip()
    if not name or any(c.isspace() for c in name):
        return None
    inner = text[i + 1 : -1]
    depth = 0
    for ch in inner:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return None
    return name, inner

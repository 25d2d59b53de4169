"""Splitting raw text into decodable fragments.

Mixed-script lines are carved into maximal runs of word characters; the
delimiter runs between them are carried through segmentation untouched,
so the original line is always recoverable from the output.
"""
from embseg import fragment_texts, reassemble, split_fragments

LINES = [
    "今天天气很好！我们去爬山。",
    "价格是120元（含税），明天涨价10%。",
    "ＡＢＣ是全角字母，按标点处理：x1。y2！",
]


def main() -> None:
    for line in LINES:
        pieces = split_fragments(line)
        print(f"line:      {line}")
        for piece in pieces:
            print(f"  {piece.kind:9s} {piece.text!r}")
        frags = fragment_texts(pieces)
        # stand-in segmentation: one character per word
        rebuilt = reassemble([list(f) for f in frags], pieces)
        print(f"rebuilt:   {rebuilt}")
        assert rebuilt.replace(" ", "") == line
        print()


if __name__ == "__main__":
    main()

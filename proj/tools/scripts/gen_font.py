#!/usr/bin/env python3
"""Regenerates src/chartgen/font_data.inc from Pillow's built-in bitmap font.

The table is checked in; run this only when the glyph set must change.
"""
import sys
from PIL import Image, ImageDraw, ImageFont

W, H = 6, 11
font = (ImageFont.load_default_imagefont()
        if hasattr(ImageFont, "load_default_imagefont") else ImageFont.load_default())

out = ["// Generated by tools/scripts/gen_font.py. Do not edit.",
       f"// {W}x{H} monospace glyphs for ASCII 32..126, one byte per row, bit 5 = leftmost column.",
       ""]
for code in range(32, 127):
    img = Image.new("1", (W, H), 0)
    ImageDraw.Draw(img).text((0, 0), chr(code), fill=1, font=font)
    rows = []
    for y in range(H):
        bits = 0
        for x in range(W):
            if img.getpixel((x, y)):
                bits |= 1 << (W - 1 - x)
        rows.append(f"0x{bits:02x}")
    label = chr(code).replace("\\", "backslash")
    out.append("    {" + ", ".join(rows) + "},  // " + repr(label))
sys.stdout.write("\n".join(out) + "\n")

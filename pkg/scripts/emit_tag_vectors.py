"""Emit authentication test vectors as JSON lines.

Each line carries a balise id, key version, random user payload, the
derived 12-bit tag sb, and the 32-bit scrambling key S, so another
implementation can replay the KDF/tag/PRF chain bit for bit.

Usage: python3 scripts/emit_tag_vectors.py [--count N] [--seed N]
                                           [--format long|short]
"""

import argparse
import json
import random

from balisim import auth, codec
from balisim.bits import bits_to_str


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=16)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=sorted(codec.FORMATS),
                        default="long")
    args = parser.parse_args()

    fmt = codec.FORMATS[args.format]
    rng = random.Random(args.seed)
    keystore = auth.new_keystore(seed=args.seed)

    for _ in range(args.count):
        balise_id = rng.randrange(1 << auth.ID_BITS)
        user = [rng.randrange(2) for _ in range(fmt.user_bits)]
        keys = keystore.keys_for(balise_id)
        sb = auth.tag_sb(keys.k0, user, fmt)
        s = auth.prf_s(keys.k1, sb)
        print(json.dumps({
            "id": balise_id,
            "ver": keys.ver,
            "format": fmt.name,
            "mk_hex": keystore.mk.hex(),
            "user_bits": bits_to_str(user),
            "sb_hex": f"{sb:03x}",
            "S_hex": f"{s:08x}",
        }))


if __name__ == "__main__":
    main()

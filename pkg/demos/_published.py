"""Published sixteen-tap coefficient sets shared by the demo scripts."""

from framelets.lawton import Mask

SET1 = {
    (0, 0, 0): "0.00000000000000003754",
    (1, 0, 0): "0.08378339374280850000",
    (2, 0, 0): "0.49453510790101500000",
    (3, 0, 0): "0.00000000000000024969",
    (0, 1, 0): "0.00000000000000002218",
    (1, 1, 0): "0.35330635188230000000",
    (2, 1, 0): "-0.22451807131547000000",
    (3, 1, 0): "0.00000000000000011746",
    (0, 0, 1): "0.00000000000000007270",
    (1, 0, 1): "0.16226597620431900000",
    (2, 0, 1): "-0.25534514772672400000",
    (3, 0, 1): "-0.00000000000000012892",
    (0, 1, 1): "0.00000000000000004295",
    (1, 1, 1): "0.68425970262500800000",
    (2, 1, 1): "0.11592624905984000000",
    (3, 1, 1): "-0.00000000000000006065",
}

SET2 = {
    (0, 0, 0): "-0.00000000000000000294",
    (1, 0, 0): "0.03292120287539430000",
    (2, 0, 0): "-0.13290357845020300000",
    (3, 0, 0): "0.00000000000000017890",
    (0, 1, 0): "0.00000000000000004947",
    (1, 1, 0): "0.55716952051625900000",
    (2, 1, 0): "0.24991965790058100000",
    (3, 1, 0): "-0.00000000000000000691",
    (0, 0, 1): "-0.00000000000000000396",
    (1, 0, 1): "0.04430091724524290000",
    (2, 0, 1): "0.09876422297993930000",
    (3, 0, 1): "-0.00000000000000013295",
    (0, 1, 1): "0.00000000000000006657",
    (1, 1, 1): "0.74976363753740400000",
    (2, 1, 1): "-0.18572201823152200000",
    (3, 1, 1): "0.00000000000000000514",
}


def build_mask(table) -> Mask:
    return Mask(dim=3, support=tuple(table),
                coeffs=tuple(float(v) for v in table.values()))

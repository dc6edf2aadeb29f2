"""Wavelet filter bank tables (generated by tools/gen_filters.py; do not edit).

Quadruple layout per family: (dec_lo, dec_hi, rec_lo, rec_hi), equal even
lengths, analysis by convolution + odd-phase downsampling. Regenerate with
``python tools/gen_filters.py`` if the family list ever changes.
"""

FILTERS = {
    'haar': (
        (0.7071067811865476, 0.7071067811865476),
        (-0.7071067811865476, 0.7071067811865476),
        (0.7071067811865476, 0.7071067811865476),
        (0.7071067811865476, -0.7071067811865476),
    ),
    'db2': (
        (-0.12940952255126037, 0.2241438680420134, 0.8365163037378079, 0.48296291314453416),
        (-0.48296291314453416, 0.8365163037378079, -0.2241438680420134, -0.12940952255126037),
        (0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037),
        (-0.12940952255126037, -0.2241438680420134, 0.8365163037378079, -0.48296291314453416),
    ),
    'db3': (
        (0.03522629188570953, -0.08544127388202666, -0.13501102001025458, 0.45987750211849154, 0.8068915093110925, 0.33267055295008263),
        (-0.33267055295008263, 0.8068915093110925, -0.45987750211849154, -0.13501102001025458, 0.08544127388202666, 0.03522629188570953),
        (0.33267055295008263, 0.8068915093110925, 0.45987750211849154, -0.13501102001025458, -0.08544127388202666, 0.03522629188570953),
        (0.03522629188570953, 0.08544127388202666, -0.13501102001025458, -0.45987750211849154, 0.8068915093110925, -0.33267055295008263),
    ),
    'db4': (
        (-0.010597401785069032, 0.0328830116668852, 0.030841381835560764, -0.18703481171909309, -0.027983769416859854, 0.6308807679298589, 0.7148465705529157, 0.2303778133088965),
        (-0.2303778133088965, 0.7148465705529157, -0.6308807679298589, -0.027983769416859854, 0.18703481171909309, 0.030841381835560764, -0.0328830116668852, -0.010597401785069032),
        (0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854, -0.18703481171909309, 0.030841381835560764, 0.0328830116668852, -0.010597401785069032),
        (-0.010597401785069032, -0.0328830116668852, 0.030841381835560764, 0.18703481171909309, -0.027983769416859854, -0.6308807679298589, 0.7148465705529157, -0.2303778133088965),
    ),
    'bior1.3': (
        (-0.08838834764831845, 0.08838834764831845, 0.7071067811865476, 0.7071067811865476, 0.08838834764831845, -0.08838834764831845),
        (-0.0, 0.0, -0.7071067811865476, 0.7071067811865476, -0.0, 0.0),
        (0.0, 0.0, 0.7071067811865476, 0.7071067811865476, 0.0, 0.0),
        (-0.08838834764831845, -0.08838834764831845, 0.7071067811865476, -0.7071067811865476, 0.08838834764831845, 0.08838834764831845),
    ),
    'bior1.5': (
        (0.01657281518405971, -0.01657281518405971, -0.12153397801643787, 0.12153397801643787, 0.7071067811865476, 0.7071067811865476, 0.12153397801643787, -0.12153397801643787, -0.01657281518405971, 0.01657281518405971),
        (-0.0, 0.0, -0.0, 0.0, -0.7071067811865476, 0.7071067811865476, -0.0, 0.0, -0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0, 0.7071067811865476, 0.7071067811865476, 0.0, 0.0, 0.0, 0.0),
        (0.01657281518405971, 0.01657281518405971, -0.12153397801643787, -0.12153397801643787, 0.7071067811865476, -0.7071067811865476, 0.12153397801643787, 0.12153397801643787, -0.01657281518405971, -0.01657281518405971),
    ),
    'bior2.2': (
        (0.0, -0.1767766952966369, 0.3535533905932738, 1.0606601717798214, 0.3535533905932738, -0.1767766952966369),
        (-0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0, 0.0),
        (0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0),
        (0.0, 0.1767766952966369, 0.3535533905932738, -1.0606601717798214, 0.3535533905932738, 0.1767766952966369),
    ),
    'bior2.4': (
        (0.0, 0.03314563036811942, -0.06629126073623884, -0.1767766952966369, 0.4198446513295126, 0.9943689110435825, 0.4198446513295126, -0.1767766952966369, -0.06629126073623884, 0.03314563036811942),
        (-0.0, 0.0, -0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0, 0.0, -0.0, 0.0),
        (0.0, 0.0, 0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0, 0.0, 0.0),
        (0.0, -0.03314563036811942, -0.06629126073623884, 0.1767766952966369, 0.4198446513295126, -0.9943689110435825, 0.4198446513295126, 0.1767766952966369, -0.06629126073623884, -0.03314563036811942),
    ),
    'bior3.1': (
        (-0.3535533905932738, 1.0606601717798214, 1.0606601717798214, -0.3535533905932738),
        (-0.1767766952966369, 0.5303300858899107, -0.5303300858899107, 0.1767766952966369),
        (0.1767766952966369, 0.5303300858899107, 0.5303300858899107, 0.1767766952966369),
        (-0.3535533905932738, -1.0606601717798214, 1.0606601717798214, 0.3535533905932738),
    ),
    'coif1': (
        (-0.07273261951252645, 0.3378976624574818, 0.8525720202116004, 0.3848648468648578, -0.07273261951252645, -0.01565572813579199),
        (0.01565572813579199, -0.07273261951252645, -0.3848648468648578, 0.8525720202116004, -0.3378976624574818, -0.07273261951252645),
        (-0.01565572813579199, -0.07273261951252645, 0.3848648468648578, 0.8525720202116004, 0.3378976624574818, -0.07273261951252645),
        (-0.07273261951252645, -0.3378976624574818, 0.8525720202116004, -0.3848648468648578, -0.07273261951252645, 0.01565572813579199),
    ),
    'coif2': (
        (0.016387336463201757, -0.04146493678686873, -0.06737255472371977, 0.3861100668227507, 0.8127236354494092, 0.4170051844232577, -0.07648859907828347, -0.05943441864644367, 0.02368017194685272, 0.005611434819372135, -0.0018232088709127423, -0.0007205494455204089),
        (0.0007205494455204089, -0.0018232088709127423, -0.005611434819372135, 0.02368017194685272, 0.05943441864644367, -0.07648859907828347, -0.4170051844232577, 0.8127236354494092, -0.3861100668227507, -0.06737255472371977, 0.04146493678686873, 0.016387336463201757),
        (-0.0007205494455204089, -0.0018232088709127423, 0.005611434819372135, 0.02368017194685272, -0.05943441864644367, -0.07648859907828347, 0.4170051844232577, 0.8127236354494092, 0.3861100668227507, -0.06737255472371977, -0.04146493678686873, 0.016387336463201757),
        (0.016387336463201757, 0.04146493678686873, -0.06737255472371977, -0.3861100668227507, 0.8127236354494092, -0.4170051844232577, -0.07648859907828347, 0.05943441864644367, 0.02368017194685272, -0.005611434819372135, -0.0018232088709127423, 0.0007205494455204089),
    ),
    'coif3': (
        (-0.003793512864408472, 0.007782596425721195, 0.023452696142217705, -0.06577191128175496, -0.061123390003234766, 0.40517690240981546, 0.7937772226262588, 0.4284834763764704, -0.07179982161906151, -0.08230192710565727, 0.03455502757308323, 0.01588054486343149, -0.009007976136606699, -0.0025745176881011135, 0.0011175187708056741, 0.0004662169598183656, -7.098330250646761e-05, -3.4599773196082754e-05),
        (3.4599773196082754e-05, -7.098330250646761e-05, -0.0004662169598183656, 0.0011175187708056741, 0.0025745176881011135, -0.009007976136606699, -0.01588054486343149, 0.03455502757308323, 0.08230192710565727, -0.07179982161906151, -0.4284834763764704, 0.7937772226262588, -0.40517690240981546, -0.061123390003234766, 0.06577191128175496, 0.023452696142217705, -0.007782596425721195, -0.003793512864408472),
        (-3.4599773196082754e-05, -7.098330250646761e-05, 0.0004662169598183656, 0.0011175187708056741, -0.0025745176881011135, -0.009007976136606699, 0.01588054486343149, 0.03455502757308323, -0.08230192710565727, -0.07179982161906151, 0.4284834763764704, 0.7937772226262588, 0.40517690240981546, -0.061123390003234766, -0.06577191128175496, 0.023452696142217705, 0.007782596425721195, -0.003793512864408472),
        (-0.003793512864408472, -0.007782596425721195, 0.023452696142217705, 0.06577191128175496, -0.061123390003234766, -0.40517690240981546, 0.7937772226262588, -0.4284834763764704, -0.07179982161906151, 0.08230192710565727, 0.03455502757308323, -0.01588054486343149, -0.009007976136606699, 0.0025745176881011135, 0.0011175187708056741, -0.0004662169598183656, -7.098330250646761e-05, 3.4599773196082754e-05),
    ),
}

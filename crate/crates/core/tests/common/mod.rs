// Ordinates of all zeros below 200 (mpmath, 25 digits, rounded).
pub const ZEROS_BELOW_200: [f64; 79] = [
    14.1347251417347, 21.0220396387716, 25.0108575801457, 30.4248761258595, 32.9350615877392,
    37.5861781588257, 40.9187190121475, 43.327073280915, 48.0051508811672, 49.7738324776723,
    52.9703214777145, 56.4462476970634, 59.3470440026024, 60.8317785246098, 65.1125440480816,
    67.0798105294942, 69.546401711174, 72.0671576744819, 75.7046906990839, 77.1448400688748,
    79.3373750202494, 82.910380854086, 84.7354929805171, 87.4252746131252, 88.8091112076345,
    92.4918992705585, 94.6513440405199, 95.8706342282453, 98.8311942181937, 101.317851005731,
    103.725538040478, 105.446623052326, 107.168611184276, 111.02953554317, 111.874659176993,
    114.320220915453, 116.226680320858, 118.790782865976, 121.370125002421, 122.946829293553,
    124.256818554346, 127.516683879596, 129.578704199956, 131.087688530933, 133.497737202998,
    134.756509753374, 138.116042054533, 139.736208952121, 141.123707404021, 143.111845807621,
    146.000982486766, 147.42276534256, 150.053520420785, 150.925257612241, 153.024693811199,
    156.112909294238, 157.597591817594, 158.84998817142, 161.188964137596, 163.030709687182,
    165.5370691879, 167.184439978175, 169.094515415569, 169.911976479412, 173.411536519592,
    174.754191523366, 176.44143429771, 178.3774077761, 179.916484020257, 182.207078484366,
    184.874467848388, 185.598783677707, 187.228922583502, 189.416158656017, 192.026656360714,
    193.079726603846, 195.265396679529, 196.876481840958, 198.015309676252,
];

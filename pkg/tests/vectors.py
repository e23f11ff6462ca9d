"""Published test vectors for the block-cipher layer.

Sources: NIST SP 800-38A (AES-CBC), NIST SP 800-38B / RFC 4493 (CMAC),
NIST SP 800-67 and the NBS DES known-answer tables (3DES), and the ICAO
Doc 9303 BAC worked example (two-key 3DES-CBC, MAC algorithm 3).
"""

SP800_38A_PLAIN = bytes.fromhex(
    "6bc1bee22e409f96e93d7e117393172a"
    "ae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52ef"
    "f69f2445df4f9b17ad2b417be66c3710"
)
IV = bytes(range(16))

AES_KEYS = {
    128: bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c"),
    192: bytes.fromhex("8e73b0f7da0e6452c810f32b809079e562f8ead2522c6b7b"),
    256: bytes.fromhex("603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4"),
}

CBC_VECTORS = {
    128: "7649abac8119b246cee98e9b12e9197d5086cb9b507219ee95db113a917678b2"
         "73bed6b8e3c1743b7116e69e222295163ff1caa1681fac09120eca307586e1a7",
    192: "4f021db243bc633d7178183a9fa071e8b4d9ada9ad7dedf4e5e738763f69145a"
         "571b242012fb7ae07fa9baac3df102e008b0e27988598881d920a9e64f5615cd",
    256: "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d"
         "39f23369a9d9bacfa530e26304231461b2eb05e2c39be9fcda6c19078c6a9d1b",
}

# (key bits, message length) -> tag
CMAC_VECTORS = {
    (128, 0): "bb1d6929e95937287fa37d129b756746",
    (128, 16): "070a16b46b4d4144f79bdd9dd04a287c",
    (128, 40): "dfa66747de9ae63030ca32611497c827",
    (128, 64): "51f0bebf7e3b9d92fc49741779363cfe",
    (192, 0): "d17ddf46adaacde531cac483de7a9367",
    (192, 16): "9e99a7bf31e710900662f65e617c5184",
    (192, 40): "8a1de5be2eb31aad089a82e6ee908b0e",
    (192, 64): "a1d5df0eed790f794d77589659f39a11",
    (256, 0): "028962f61b7bf89efc6b551f4667d983",
    (256, 16): "28a7023f452e8f82bd4bf28d8c37c35c",
    (256, 40): "aaf3d8f1de5640c232f5b169b9c911e6",
    (256, 64): "e1992190549f6ed5696a2c056c315410",
}

# SP 800-67 three-key TDEA example
TDES_KEY = bytes.fromhex("0123456789ABCDEF23456789ABCDEF01456789ABCDEF0123")
TDES_PLAIN = b"The qufck brown fox jump"
TDES_CIPHER = bytes.fromhex("A826FD8CE53B855FCCE21C8112256FE668D5C05DD9B6B900")

# ICAO BAC worked example
K_ENC = bytes.fromhex("ab94fdecf2674fdfb9b391f85d7f76f2")
K_MAC = bytes.fromhex("7962d9ece03d1acd4c76089dce131543")
S_IFD = bytes.fromhex("781723860C06C2264608F919887022120B795240CB7049B01C19B33E32804F0B")
E_IFD = bytes.fromhex("72C29C2371CC9BDB65B779B8E8D37B29ECC154AA56A8799FAE2F498F76ED92F2")
M_IFD = bytes.fromhex("5F1448EEA8AD90A7")
R_IC = bytes.fromhex("4608F91988702212781723860C06C2260B4F80323EB3191CB04970CB4052790B")
E_IC = bytes.fromhex("46B9342A41396CD7386BF5803104D7CEDC122B9132139BAF2EEDC94EE178534F")
M_IC = bytes.fromhex("2F2D235D074D7449")

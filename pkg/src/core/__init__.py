"""
Núcleo do projeto: álgebra dos grupos, modelo semidireto, geometria de
superfícies, classificação, construção e verificação.
"""

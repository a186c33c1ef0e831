"""路段阻抗函数"""

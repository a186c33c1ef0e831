"""样本平均近似 (SAA) 模块"""

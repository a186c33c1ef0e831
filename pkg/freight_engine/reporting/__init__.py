"""报表：成本统计、吨英里与流量导出"""

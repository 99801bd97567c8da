namespace zs {}

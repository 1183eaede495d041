import mpmath as mp, sys
def ml(a,b,z):
    a=mp.mpf(a); b=mp.mpf(b); z=mp.mpf(z)
    r = abs(z)**(1/a)
    # cancellation costs r/ln10 digits and the result can be as small as e^-r
    mp.mp.dps = int(40 + 2*float(r)/2.3)
    s=mp.mpf(0); k=0
    while True:
        t = z**k/mp.gamma(a*k+b)
        s+=t
        if k> 5 and abs(t) < mp.mpf(10)**(-40) * abs(s) and a*k+b > 2*r+10: break
        k+=1
    return s
import random
random.seed(1)
pts=[]
for a in [0.5,0.8,1.0,1.1,1.25,1.5,1.75,1.9,1.99,2.0]:
    for b in [0.3,1.0,2.0,a,a-1 if a>1 else 0.7,3.0,a+1]:
        if b<=0: continue
        for z in [-0.5,-3,-9,-20,-40,-70,-100,-150,-300,-600,-1000,-3000, 2.5, 10]:
            if abs(z)**(1/a) > 500: continue
            v = ml(a,b,z)
            print(repr(a),repr(b),repr(float(z)),mp.nstr(v,25))
